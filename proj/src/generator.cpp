#include "pcgen/generator.hpp"

#include "pcgen/rng.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcgen {

std::string Generator::spec_string() const {
    std::ostringstream os;
    os << name_;
    char sep = ':';
    for (const auto &[key, val] : params_) {
        os << sep << key << '=' << val;
        sep = ',';
    }
    return os.str();
}

void Generator::check_admits(int n) const {
    if (!admits(n))
        throw std::invalid_argument(spec_string() + ": n=" + std::to_string(n) +
                                    " is not on the family's grid");
}

void Generator::check_stretch(int n) const {
    if (output_len(n) <= n)
        throw std::invalid_argument(spec_string() + ": not stretching at n=" + std::to_string(n));
}

std::vector<int> Generator::grid(int lo, int hi) const {
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n)
        if (admits(n))
            out.push_back(n);
    return out;
}

// ---- parity ----------------------------------------------------------------

namespace {

class ParityGen : public Generator {
  public:
    explicit ParityGen(int nominal_n)
        : Generator("parity", {{"n", nominal_n}}), nominal_n_(nominal_n) {
        if (nominal_n < 1)
            throw std::invalid_argument("parity: n must be >= 1");
    }

    bool admits(int n) const override { return n >= 1; }
    int output_len(int n) const override {
        check_admits(n);
        return n + 1;
    }
    int default_n() const override { return nominal_n_; }

    EvalResult evaluate(const BitString &x) const override {
        if (x.empty())
            throw std::invalid_argument("parity: empty input");
        EvalResult res;
        res.out = x;
        res.out.push_back(x.parity());
        return res;
    }

    Circuit synthesize_circuit(int n) const override {
        check_admits(n);
        CircuitBuilder bld(n);
        std::vector<int> outs;
        for (int i = 0; i < n; ++i)
            outs.push_back(bld.input(i));
        int acc = bld.input(0);
        for (int i = 1; i < n; ++i)
            acc = bld.b_xor(acc, bld.input(i));
        outs.push_back(acc);
        return bld.finish(outs);
    }

  private:
    int nominal_n_;
};

} // namespace

GeneratorPtr make_parity_gen(int nominal_n) { return std::make_shared<ParityGen>(nominal_n); }

// ---- tru -------------------------------------------------------------------

namespace {

class TruGen : public Generator {
  public:
    TruGen(int s, int k) : Generator("tru", {{"k", k}, {"s", s}}), p_(s, k, 1) {
        if (k > 26)
            throw std::invalid_argument("tru: k too large for a materialized truth table");
        m_ = 1 << k;
        if (p_.total_len >= m_)
            throw std::invalid_argument("tru: not stretching, 10*s*log2(s) >= 2^k");
    }

    bool admits(int n) const override { return n == p_.total_len; }
    int output_len(int n) const override {
        check_admits(n);
        return m_;
    }
    int default_n() const override { return p_.total_len; }

    EvalResult evaluate(const BitString &v) const override {
        if (static_cast<int>(v.size()) != p_.total_len)
            throw std::invalid_argument("tru: input length mismatch");
        Circuit c = decode_circuit(v, p_);
        EvalResult res;
        res.out = BitString(static_cast<size_t>(m_));
        for (int j = 0; j < m_; ++j) {
            EvalResult e = eval_circuit(c, BitString::from_index(static_cast<uint64_t>(j), p_.k));
            res.out.set(static_cast<size_t>(j), e.out[0]);
            res.gate_evals += e.gate_evals;
        }
        return res;
    }

    Circuit synthesize_circuit(int n) const override {
        check_admits(n);
        CircuitBuilder bld(n);
        std::vector<int> v_nodes;
        for (int i = 0; i < n; ++i)
            v_nodes.push_back(bld.input(i));
        std::vector<int> outs;
        for (int j = 0; j < m_; ++j) {
            BitString u = BitString::from_index(static_cast<uint64_t>(j), p_.k);
            std::vector<int> u_nodes;
            for (int i = 0; i < p_.k; ++i)
                u_nodes.push_back(bld.b_const(u[static_cast<size_t>(i)] != 0));
            auto block = emit_universal_eval(bld, p_, v_nodes, u_nodes);
            outs.push_back(block[0]);
        }
        return bld.finish(outs);
    }

  private:
    EncodingParams p_;
    int m_;
};

} // namespace

GeneratorPtr make_tru(int s, int k) { return std::make_shared<TruGen>(s, k); }

// ---- gadget generators -------------------------------------------------------

BitString gad_evaluate(const GadgetParams &gp, const BitString &x) {
    if (static_cast<int>(x.size()) != gp.n())
        throw std::invalid_argument("gad_evaluate: input length mismatch");
    BitString v = x.slice(0, static_cast<size_t>(gp.l));
    BitString out;
    for (int s = 0; s < gp.t; ++s) {
        BitString u = x.slice(static_cast<size_t>(gp.l + s * gp.k), static_cast<size_t>(gp.k));
        out.append(gp.f->apply(v, u).out);
    }
    return out;
}

GadGenerator::GadGenerator(std::string name, std::map<std::string, long long> params,
                           GadgetParams gp)
    : Generator(std::move(name), std::move(params)), gp_(std::move(gp)) {
    if (!gp_.f)
        throw std::invalid_argument("gad: missing base function");
    if (gp_.l < 1 || gp_.k < 1 || gp_.t < 1)
        throw std::invalid_argument("gad: l, k, t must be positive");
    if (gp_.f->l() != gp_.l || gp_.f->k() != gp_.k)
        throw std::invalid_argument("gad: base function arity mismatch");
    if (gp_.t <= gp_.l)
        throw std::invalid_argument("gad: t must exceed l (otherwise the map does not stretch)");
}

int GadGenerator::output_len(int n) const {
    check_admits(n);
    return gp_.m();
}

EvalResult GadGenerator::evaluate(const BitString &x) const {
    if (static_cast<int>(x.size()) != gp_.n())
        throw std::invalid_argument(spec_string() + ": input length mismatch");
    BitString v = x.slice(0, static_cast<size_t>(gp_.l));
    EvalResult res;
    for (int s = 0; s < gp_.t; ++s) {
        BitString u = x.slice(static_cast<size_t>(gp_.l + s * gp_.k), static_cast<size_t>(gp_.k));
        EvalResult block = gp_.f->apply(v, u);
        res.out.append(block.out);
        res.gate_evals += block.gate_evals;
    }
    return res;
}

Circuit GadGenerator::synthesize_circuit(int n) const {
    check_admits(n);
    CircuitBuilder bld(n);
    std::vector<int> v_nodes;
    for (int i = 0; i < gp_.l; ++i)
        v_nodes.push_back(bld.input(i));
    std::vector<int> outs;
    for (int s = 0; s < gp_.t; ++s) {
        std::vector<int> u_nodes;
        for (int i = 0; i < gp_.k; ++i)
            u_nodes.push_back(bld.input(gp_.l + s * gp_.k + i));
        auto block = gp_.f->emit(bld, v_nodes, u_nodes);
        outs.insert(outs.end(), block.begin(), block.end());
    }
    return bld.finish(outs);
}

namespace {

class ToyFun : public GadgetFun {
  public:
    ToyFun(int l, int k) : l_(l), k_(k) {
        if (l < 1 || k < 1)
            throw std::invalid_argument("toy fun: l and k must be positive");
    }

    std::string name() const override { return "toy"; }
    int l() const override { return l_; }
    int k() const override { return k_; }

    EvalResult apply(const BitString &v, const BitString &u) const override {
        EvalResult res;
        res.out = u;
        res.out.push_back(v.parity() ^ u.parity());
        return res;
    }

    std::vector<int> emit(CircuitBuilder &bld, const std::vector<int> &v_nodes,
                          const std::vector<int> &u_nodes) const override {
        std::vector<int> outs(u_nodes);
        int acc = v_nodes[0];
        for (size_t i = 1; i < v_nodes.size(); ++i)
            acc = bld.b_xor(acc, v_nodes[i]);
        for (int u : u_nodes)
            acc = bld.b_xor(acc, u);
        outs.push_back(acc);
        return outs;
    }

  private:
    int l_, k_;
};

class CvFun : public GadgetFun {
  public:
    CvFun(int s, int k) : p_(s, k, k + 1) {}

    std::string name() const override { return "cv"; }
    int l() const override { return p_.total_len; }
    int k() const override { return p_.k; }

    EvalResult apply(const BitString &v, const BitString &u) const override {
        return circuit_value(p_, v, u);
    }

    std::vector<int> emit(CircuitBuilder &bld, const std::vector<int> &v_nodes,
                          const std::vector<int> &u_nodes) const override {
        return emit_universal_eval(bld, p_, v_nodes, u_nodes);
    }

    const EncodingParams &params() const { return p_; }

  private:
    EncodingParams p_;
};

} // namespace

GadgetFunPtr make_toy_fun(int l, int k) { return std::make_shared<ToyFun>(l, k); }
GadgetFunPtr make_cv_fun(int s, int k) { return std::make_shared<CvFun>(s, k); }

std::shared_ptr<const GadGenerator> make_gad_sq(int k) {
    if (k < 2)
        throw std::invalid_argument("gadsq: k must be >= 2");
    GadgetFunPtr f = make_cv_fun(k * k, k);
    GadgetParams gp{f->l(), k, f->l() + 1, f};
    return std::make_shared<GadGenerator>("gadsq", std::map<std::string, long long>{{"k", k}},
                                          gp);
}

std::shared_ptr<const GadGenerator> make_gad_sq_c(int k, int t) {
    if (k < 2)
        throw std::invalid_argument("gadsqc: k must be >= 2");
    GadgetFunPtr f = make_cv_fun(k * k, k);
    if (t <= f->l())
        throw std::invalid_argument("gadsqc: t must exceed l=" + std::to_string(f->l()));
    GadgetParams gp{f->l(), k, t, f};
    return std::make_shared<GadGenerator>(
        "gadsqc", std::map<std::string, long long>{{"k", k}, {"t", t}}, gp);
}

std::shared_ptr<const GadGenerator> make_toy_gad(int l, int k, int t) {
    GadgetFunPtr f = make_toy_fun(l, k);
    if (t < 0)
        t = l + 1;
    GadgetParams gp{l, k, t, f};
    return std::make_shared<GadGenerator>(
        "toygad", std::map<std::string, long long>{{"k", k}, {"l", l}, {"t", t}}, gp);
}

// ---- nw ---------------------------------------------------------------------

int NwGadget::encoded_len(int k, int c) {
    if (k < 2)
        throw std::invalid_argument("nw: k must be >= 2");
    if (c < 1 || c > ceil_log2(static_cast<uint64_t>(k)))
        throw std::invalid_argument("nw: c must satisfy 1 <= c <= ceil_log2(k)");
    return c * (k + 1) * ceil_log2(static_cast<uint64_t>(k)) + (1 << c);
}

void NwGadget::validate() const {
    encoded_len(k, c); // re-checks the parameter ranges
    if (static_cast<int>(sets.size()) != k + 1)
        throw std::invalid_argument("nw: need exactly k+1 index sets");
    for (const auto &set : sets) {
        if (static_cast<int>(set.size()) != c)
            throw std::invalid_argument("nw: each set must have exactly c indices");
        for (int idx : set)
            if (idx < 0 || idx >= k)
                throw std::invalid_argument("nw: index out of range");
    }
    if (static_cast<int>(h_table.size()) != (1 << c))
        throw std::invalid_argument("nw: h table must have 2^c bits");
}

BitString NwGadget::encode() const {
    validate();
    int iw = ceil_log2(static_cast<uint64_t>(k));
    BitString out;
    for (const auto &set : sets)
        for (int idx : set)
            out.append(BitString::from_index(static_cast<uint64_t>(idx), iw));
    out.append(h_table);
    return out;
}

NwGadget NwGadget::decode(const BitString &v, int k, int c) {
    int len = encoded_len(k, c);
    if (static_cast<int>(v.size()) != len)
        throw std::invalid_argument("nw: gadget encoding length mismatch");
    int iw = ceil_log2(static_cast<uint64_t>(k));
    NwGadget g;
    g.k = k;
    g.c = c;
    size_t pos = 0;
    for (int i = 0; i <= k; ++i) {
        std::vector<int> set;
        for (int j = 0; j < c; ++j) {
            uint64_t raw = v.slice(pos, static_cast<size_t>(iw)).to_index();
            set.push_back(static_cast<int>(raw % static_cast<uint64_t>(k)));
            pos += static_cast<size_t>(iw);
        }
        g.sets.push_back(std::move(set));
    }
    g.h_table = v.slice(pos, static_cast<size_t>(1) << c);
    return g;
}

NwGadget NwGadget::sample(int k, int c, uint64_t seed) {
    SplitMix64 rng(seed);
    return decode(rng.bits(static_cast<size_t>(encoded_len(k, c))), k, c);
}

BitString nw_eval(const NwGadget &g, const BitString &u) {
    if (static_cast<int>(u.size()) != g.k)
        throw std::invalid_argument("nw_eval: input length mismatch");
    BitString out(static_cast<size_t>(g.k + 1));
    for (int i = 0; i <= g.k; ++i) {
        uint64_t idx = 0;
        for (int j = 0; j < g.c; ++j)
            idx = (idx << 1) | u[static_cast<size_t>(g.sets[static_cast<size_t>(i)][static_cast<size_t>(j)])];
        out.set(static_cast<size_t>(i), g.h_table[static_cast<size_t>(idx)]);
    }
    return out;
}

namespace {

class NwFun : public GadgetFun {
  public:
    NwFun(int k, int c) : k_(k), c_(c), l_(NwGadget::encoded_len(k, c)) {}

    std::string name() const override { return "nw"; }
    int l() const override { return l_; }
    int k() const override { return k_; }

    EvalResult apply(const BitString &v, const BitString &u) const override {
        EvalResult res;
        res.out = nw_eval(NwGadget::decode(v, k_, c_), u);
        return res;
    }

    std::vector<int> emit(CircuitBuilder &bld, const std::vector<int> &v_nodes,
                          const std::vector<int> &u_nodes) const override {
        int iw = ceil_log2(static_cast<uint64_t>(k_));
        size_t pos = 0;
        std::vector<int> outs;
        size_t table_pos = static_cast<size_t>(c_ * (k_ + 1) * iw);
        for (int i = 0; i <= k_; ++i) {
            std::vector<int> sel_bits;
            for (int j = 0; j < c_; ++j) {
                std::vector<int> idx_bits(v_nodes.begin() + static_cast<long>(pos),
                                          v_nodes.begin() + static_cast<long>(pos + iw));
                sel_bits.push_back(bld.b_select_mod(idx_bits, u_nodes));
                pos += static_cast<size_t>(iw);
            }
            std::vector<int> terms;
            for (uint64_t idx = 0; idx < (uint64_t(1) << c_); ++idx)
                terms.push_back(bld.b_and(bld.b_eq_const(sel_bits, idx),
                                          v_nodes[table_pos + static_cast<size_t>(idx)]));
            outs.push_back(bld.b_or_chain(terms));
        }
        return outs;
    }

  private:
    int k_, c_, l_;
};

class NwFixedGen : public Generator {
  public:
    NwFixedGen(NwGadget g, int t)
        : Generator("nw", {{"c", g.c}, {"k", g.k}, {"t", t}}), g_(std::move(g)), t_(t) {
        g_.validate();
        if (t_ < 1)
            throw std::invalid_argument("nw: t must be >= 1");
    }

    const NwGadget &gadget() const { return g_; }

    std::map<std::string, std::string> provenance() const override {
        return {{"gadget", g_.encode().to_hex()}};
    }

    bool admits(int n) const override { return n == g_.k * t_; }
    int output_len(int n) const override {
        check_admits(n);
        return (g_.k + 1) * t_;
    }
    int default_n() const override { return g_.k * t_; }

    EvalResult evaluate(const BitString &x) const override {
        if (static_cast<int>(x.size()) != g_.k * t_)
            throw std::invalid_argument("nw: input length mismatch");
        EvalResult res;
        for (int s = 0; s < t_; ++s)
            res.out.append(
                nw_eval(g_, x.slice(static_cast<size_t>(s * g_.k), static_cast<size_t>(g_.k))));
        return res;
    }

    Circuit synthesize_circuit(int n) const override {
        check_admits(n);
        CircuitBuilder bld(n);
        std::vector<int> outs;
        for (int s = 0; s < t_; ++s) {
            std::vector<int> u_nodes;
            for (int i = 0; i < g_.k; ++i)
                u_nodes.push_back(bld.input(s * g_.k + i));
            for (int i = 0; i <= g_.k; ++i) {
                std::vector<int> sel_bits;
                for (int j = 0; j < g_.c; ++j)
                    sel_bits.push_back(
                        u_nodes[static_cast<size_t>(g_.sets[static_cast<size_t>(i)][static_cast<size_t>(j)])]);
                std::vector<int> terms;
                for (uint64_t idx = 0; idx < (uint64_t(1) << g_.c); ++idx)
                    if (g_.h_table[static_cast<size_t>(idx)])
                        terms.push_back(bld.b_eq_const(sel_bits, idx));
                outs.push_back(bld.b_or_chain(terms));
            }
        }
        return bld.finish(outs);
    }

  private:
    NwGadget g_;
    int t_;
};

} // namespace

GadgetFunPtr make_nw_fun(int k, int c) { return std::make_shared<NwFun>(k, c); }

GeneratorPtr make_nw_fixed(const NwGadget &g, int t) {
    return std::make_shared<NwFixedGen>(g, t);
}

// ---- spec parsing -------------------------------------------------------------

namespace {

std::map<std::string, std::string> parse_kv(const std::string &body) {
    std::map<std::string, std::string> kv;
    std::istringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("generator spec: expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

long long want_int(const std::map<std::string, std::string> &kv, const std::string &key) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::invalid_argument("generator spec: missing parameter '" + key + "'");
    return std::stoll(it->second);
}

std::string read_hex_file(const std::string &path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open gadget file: " + path);
    std::string hex, line;
    while (std::getline(f, line))
        for (char ch : line)
            if (!isspace(static_cast<unsigned char>(ch)))
                hex.push_back(ch);
    return hex;
}

} // namespace

GeneratorPtr parse_generator_spec(const std::string &spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos)
        kv = parse_kv(spec.substr(colon + 1));

    if (name == "parity")
        return make_parity_gen(static_cast<int>(want_int(kv, "n")));
    if (name == "tru")
        return make_tru(static_cast<int>(want_int(kv, "s")), static_cast<int>(want_int(kv, "k")));
    if (name == "gadsq")
        return make_gad_sq(static_cast<int>(want_int(kv, "k")));
    if (name == "gadsqc")
        return make_gad_sq_c(static_cast<int>(want_int(kv, "k")),
                             static_cast<int>(want_int(kv, "t")));
    if (name == "toygad") {
        int t = kv.count("t") ? static_cast<int>(want_int(kv, "t")) : -1;
        return make_toy_gad(static_cast<int>(want_int(kv, "l")),
                            static_cast<int>(want_int(kv, "k")), t);
    }
    if (name == "nw") {
        int k = static_cast<int>(want_int(kv, "k"));
        int c = static_cast<int>(want_int(kv, "c"));
        int t = kv.count("t") ? static_cast<int>(want_int(kv, "t")) : 1;
        NwGadget g;
        if (kv.count("gadget")) {
            std::string hex = read_hex_file(kv.at("gadget"));
            g = NwGadget::decode(
                BitString::from_hex(hex, static_cast<size_t>(NwGadget::encoded_len(k, c))), k, c);
        } else if (kv.count("seed")) {
            g = NwGadget::sample(k, c, static_cast<uint64_t>(want_int(kv, "seed")));
        } else {
            throw std::invalid_argument("nw spec: needs gadget=<hexfile> or seed=<n>");
        }
        return make_nw_fixed(g, t);
    }
    throw std::invalid_argument("unknown generator '" + name + "'");
}

} // namespace pcgen
