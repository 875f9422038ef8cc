#include "pcgen/range_oracle.hpp"

#include "json.hpp"

#include <cassert>
#include <fstream>
#include <stdexcept>

namespace pcgen {

namespace {

void check_enum_cap(int n, const OracleCaps &caps) {
    if (n > caps.max_n)
        throw std::invalid_argument("oracle: n=" + std::to_string(n) + " exceeds brute-force cap " +
                                    std::to_string(caps.max_n));
}

} // namespace

RangeResult enumerate_range(const Generator &g, int n, const OracleCaps &caps,
                            bool with_witnesses) {
    check_enum_cap(n, caps);
    if (!g.admits(n))
        throw std::invalid_argument(g.spec_string() + ": n not on grid");
    RangeResult res;
    uint64_t total = uint64_t(1) << n;
    for (uint64_t i = 0; i < total; ++i) {
        BitString x = BitString::from_index(i, n);
        BitString y = g.evaluate(x).out;
        ++res.evals;
        auto [it, fresh] = res.range.insert(y);
        if (fresh && with_witnesses)
            res.witness.emplace(y, x);
    }
    assert(res.evals <= (uint64_t(1) << caps.max_n));
    return res;
}

std::optional<BitString> is_in_range(const Generator &g, int n, const BitString &b,
                                     const OracleCaps &caps) {
    check_enum_cap(n, caps);
    if (!g.admits(n))
        throw std::invalid_argument(g.spec_string() + ": n not on grid");
    if (static_cast<int>(b.size()) != g.output_len(n))
        throw std::invalid_argument("is_in_range: target length != m(n)");
    uint64_t total = uint64_t(1) << n;
    for (uint64_t i = 0; i < total; ++i) {
        BitString x = BitString::from_index(i, n);
        if (g.evaluate(x).out == b)
            return x;
    }
    return std::nullopt;
}

bool NpSetSpec::member(const BitString &y, const OracleCaps &caps) const {
    return find_certificate(y, caps).has_value();
}

std::optional<BitString> NpSetSpec::find_certificate(const BitString &y,
                                                     const OracleCaps &caps) const {
    int zl = cert_len(static_cast<int>(y.size()));
    if (zl < 0)
        throw std::invalid_argument("np set '" + name + "': negative certificate length");
    if (zl > caps.max_cert_bits)
        throw std::invalid_argument("np set '" + name + "': certificate space exceeds cap");
    uint64_t total = uint64_t(1) << zl;
    for (uint64_t i = 0; i < total; ++i) {
        BitString z = BitString::from_index(i, zl);
        if (check(y, z))
            return z;
    }
    return std::nullopt;
}

NpSetSpec np_threshold_ones() {
    NpSetSpec a;
    a.name = "threshold-ones";
    a.c_exponent = 1;
    a.cert_len = [](int) { return 0; };
    a.check = [](const BitString &y, const BitString &) {
        return y.count_ones() + 1 >= y.size();
    };
    return a;
}

NpSetSpec np_pattern_match(const std::string &pattern) {
    NpSetSpec a;
    a.name = "pattern:" + pattern;
    a.c_exponent = 1;
    a.cert_len = [](int) { return 0; };
    a.check = [pattern](const BitString &y, const BitString &) {
        if (y.size() != pattern.size())
            return false;
        for (size_t i = 0; i < y.size(); ++i) {
            if (pattern[i] == '?')
                continue;
            if ((pattern[i] == '1') != (y[i] != 0))
                return false;
        }
        return true;
    };
    return a;
}

NpSetSpec np_all() {
    NpSetSpec a;
    a.name = "all";
    a.c_exponent = 1;
    a.cert_len = [](int) { return 0; };
    a.check = [](const BitString &, const BitString &) { return true; };
    return a;
}

NpSetSpec np_empty() {
    NpSetSpec a;
    a.name = "empty";
    a.c_exponent = 1;
    a.cert_len = [](int) { return 0; };
    a.check = [](const BitString &, const BitString &) { return false; };
    return a;
}

NpSetSpec np_from_netlist(const std::string &netlist_path, const std::string &manifest_path) {
    std::ifstream mf(manifest_path);
    if (!mf)
        throw std::runtime_error("cannot open manifest: " + manifest_path);
    nlohmann::json manifest = nlohmann::json::parse(mf);
    Circuit checker = load_netlist(netlist_path);
    if (checker.r != 1)
        throw std::invalid_argument("np checker must have one output");
    int m = manifest.at("m").get<int>();
    int zl = manifest.at("cert_len").get<int>();
    if (checker.k != m + zl)
        throw std::invalid_argument("np checker arity != m + cert_len");
    NpSetSpec a;
    a.name = manifest.at("name").get<std::string>();
    a.c_exponent = manifest.value("c", 1);
    a.cert_len = [zl, m](int len) {
        if (len != m)
            throw std::invalid_argument("np checker declared for a different m");
        return zl;
    };
    a.check = [checker](const BitString &y, const BitString &z) {
        return eval_circuit(checker, y + z).out[0] != 0;
    };
    return a;
}

std::optional<Intersection> intersect_np_set(const Generator &g, int n, const NpSetSpec &a,
                                             const OracleCaps &caps) {
    RangeResult rng = enumerate_range(g, n, caps, true);
    for (const auto &y : rng.range) {
        auto z = a.find_certificate(y, caps);
        if (z)
            return Intersection{y, rng.witness.at(y), *z};
    }
    return std::nullopt;
}

std::vector<ImmunityRow> immunity_probe(const Generator &g, const NpSetSpec &a,
                                        const std::vector<int> &n_list,
                                        const OracleCaps &caps) {
    std::vector<ImmunityRow> rows;
    for (int n : n_list) {
        check_enum_cap(n, caps);
        ImmunityRow row;
        row.n = n;
        row.m = g.output_len(n);
        if (row.m > caps.max_n)
            throw std::invalid_argument("immunity probe: 2^m sweep exceeds cap");
        RangeResult rng = enumerate_range(g, n, caps, true);
        uint64_t total = uint64_t(1) << row.m;
        for (uint64_t i = 0; i < total; ++i) {
            BitString y = BitString::from_index(i, row.m);
            auto z = a.find_certificate(y, caps);
            if (!z)
                continue;
            ++row.a_count;
            if (rng.range.count(y)) {
                ++row.rng_a_count;
                if (!row.first)
                    row.first = Intersection{y, rng.witness.at(y), *z};
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

TtPreimage build_tt_preimage(const Circuit &hat_c, int m_prime, int k) {
    hat_c.validate();
    if (m_prime < 0 || k < 1 || hat_c.k != m_prime + k)
        throw std::invalid_argument("build_tt_preimage: hat_c must have m'+k inputs");
    if (hat_c.r != 1)
        throw std::invalid_argument("build_tt_preimage: hat_c must have one output");
    if (k > 24)
        throw std::invalid_argument("build_tt_preimage: k too large to tabulate");

    // Pin inputs 0..m'-1 to 1.  Known-constant nodes fold away: a gate never
    // needs a wire for a constant operand (AND with 1 / OR with 0 keep the
    // other operand; everything else is itself constant).
    enum class NodeState : int8_t { Unknown, Zero, One };
    std::vector<NodeState> state(static_cast<size_t>(hat_c.num_nodes()), NodeState::Unknown);
    std::vector<int> remap(static_cast<size_t>(hat_c.num_nodes()), -1);
    for (int i = 0; i < m_prime; ++i)
        state[static_cast<size_t>(i)] = NodeState::One;
    for (int i = 0; i < k; ++i)
        remap[static_cast<size_t>(m_prime + i)] = i;

    Circuit c;
    c.k = k;
    c.r = 1;
    for (int j = 0; j < hat_c.size(); ++j) {
        const Gate &g = hat_c.gates[static_cast<size_t>(j)];
        int node = hat_c.k + j;
        NodeState ls = state[static_cast<size_t>(g.left)];
        NodeState rs = state[static_cast<size_t>(g.right)];
        Gate out{GateOp::CONST0, 0, 0};
        NodeState st = NodeState::Unknown;
        switch (g.op) {
        case GateOp::AND:
            if (ls == NodeState::Zero || rs == NodeState::Zero)
                st = NodeState::Zero;
            else if (ls == NodeState::One && rs == NodeState::One)
                st = NodeState::One;
            else if (ls == NodeState::One)
                out = Gate{GateOp::AND, remap[static_cast<size_t>(g.right)],
                           remap[static_cast<size_t>(g.right)]};
            else if (rs == NodeState::One)
                out = Gate{GateOp::AND, remap[static_cast<size_t>(g.left)],
                           remap[static_cast<size_t>(g.left)]};
            else
                out = Gate{GateOp::AND, remap[static_cast<size_t>(g.left)],
                           remap[static_cast<size_t>(g.right)]};
            break;
        case GateOp::OR:
            if (ls == NodeState::One || rs == NodeState::One)
                st = NodeState::One;
            else if (ls == NodeState::Zero && rs == NodeState::Zero)
                st = NodeState::Zero;
            else if (ls == NodeState::Zero)
                out = Gate{GateOp::OR, remap[static_cast<size_t>(g.right)],
                           remap[static_cast<size_t>(g.right)]};
            else if (rs == NodeState::Zero)
                out = Gate{GateOp::OR, remap[static_cast<size_t>(g.left)],
                           remap[static_cast<size_t>(g.left)]};
            else
                out = Gate{GateOp::OR, remap[static_cast<size_t>(g.left)],
                           remap[static_cast<size_t>(g.right)]};
            break;
        case GateOp::NOT:
            if (ls == NodeState::Zero)
                st = NodeState::One;
            else if (ls == NodeState::One)
                st = NodeState::Zero;
            else
                out = Gate{GateOp::NOT, remap[static_cast<size_t>(g.left)], 0};
            break;
        case GateOp::CONST0:
            st = NodeState::Zero;
            break;
        case GateOp::CONST1:
            st = NodeState::One;
            break;
        }
        if (st != NodeState::Unknown)
            out = Gate{st == NodeState::One ? GateOp::CONST1 : GateOp::CONST0, 0, 0};
        state[static_cast<size_t>(node)] = st;
        remap[static_cast<size_t>(node)] = k + j;
        c.gates.push_back(out);
    }
    c.validate();

    TtPreimage res;
    res.b = BitString(static_cast<size_t>(1) << k);
    for (uint64_t i = 0; i < (uint64_t(1) << k); ++i)
        res.b.set(static_cast<size_t>(i), eval_circuit(c, BitString::from_index(i, k)).out[0]);
    res.size = c.size();
    res.exceeds_threshold =
        static_cast<uint64_t>(res.size) * static_cast<uint64_t>(res.size) > (uint64_t(1) << k);
    res.c = std::move(c);
    return res;
}

} // namespace pcgen
