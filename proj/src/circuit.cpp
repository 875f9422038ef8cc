#include "pcgen/circuit.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcgen {

const char *gate_op_name(GateOp op) {
    switch (op) {
    case GateOp::AND:
        return "AND";
    case GateOp::OR:
        return "OR";
    case GateOp::NOT:
        return "NOT";
    case GateOp::CONST0:
        return "CONST0";
    case GateOp::CONST1:
        return "CONST1";
    }
    return "?";
}

void Circuit::validate() const {
    if (k < 1)
        throw std::invalid_argument("circuit: input count must be positive");
    if (r < 1)
        throw std::invalid_argument("circuit: output count must be positive");
    if (r > size())
        throw std::invalid_argument("circuit: fewer gates than outputs");
    for (int j = 0; j < size(); ++j) {
        const Gate &g = gates[j];
        int node = k + j;
        auto check_operand = [&](int idx) {
            if (idx < 0 || idx >= node)
                throw std::invalid_argument("circuit: operand must refer to an earlier node");
        };
        switch (g.op) {
        case GateOp::AND:
        case GateOp::OR:
            check_operand(g.left);
            check_operand(g.right);
            break;
        case GateOp::NOT:
            check_operand(g.left);
            break;
        case GateOp::CONST0:
        case GateOp::CONST1:
            break;
        }
        // Unused fields are still carried; keep them inside the node range so
        // the fixed-width codec can hold them.
        if (g.left < 0 || g.left >= num_nodes() || g.right < 0 || g.right >= num_nodes())
            throw std::invalid_argument("circuit: operand field out of node range");
    }
}

EvalResult eval_circuit(const Circuit &c, const BitString &u) {
    if (static_cast<int>(u.size()) != c.k)
        throw std::invalid_argument("eval_circuit: input arity mismatch");
    std::vector<uint8_t> val(c.num_nodes());
    for (int i = 0; i < c.k; ++i)
        val[i] = u[i];
    uint64_t evals = 0;
    for (int j = 0; j < c.size(); ++j) {
        const Gate &g = c.gates[j];
        uint8_t v = 0;
        switch (g.op) {
        case GateOp::AND:
            v = val[g.left] & val[g.right];
            break;
        case GateOp::OR:
            v = val[g.left] | val[g.right];
            break;
        case GateOp::NOT:
            v = val[g.left] ^ 1;
            break;
        case GateOp::CONST0:
            v = 0;
            break;
        case GateOp::CONST1:
            v = 1;
            break;
        }
        val[c.k + j] = v;
        ++evals;
    }
    EvalResult res;
    res.out = BitString(static_cast<size_t>(c.r));
    for (int i = 0; i < c.r; ++i)
        res.out.set(i, val[c.num_nodes() - c.r + i]);
    res.gate_evals = evals;
    return res;
}

EncodingParams::EncodingParams(int s_, int k_, int r_) : s(s_), k(k_), r(r_) {
    if (s < 2)
        throw std::invalid_argument("encoding params: gate budget must be >= 2");
    if (k < 1 || r < 1)
        throw std::invalid_argument("encoding params: k and r must be positive");
    if (r > s)
        throw std::invalid_argument("encoding params: r exceeds gate budget");
    addr_width = ceil_log2(static_cast<uint64_t>(k) + static_cast<uint64_t>(s));
    long long len = 10LL * s * ceil_log2(static_cast<uint64_t>(s));
    long long need = static_cast<long long>(s) * record_width();
    if (need > len)
        throw std::invalid_argument("encoding params: gate records do not fit 10*s*log2(s) bits");
    total_len = static_cast<int>(len);
}

static void put_field(BitString &bs, int pos, int width, uint64_t value) {
    for (int i = 0; i < width; ++i)
        bs.set(static_cast<size_t>(pos + i), static_cast<uint8_t>((value >> (width - 1 - i)) & 1));
}

static uint64_t get_field(const BitString &bs, int pos, int width) {
    uint64_t v = 0;
    for (int i = 0; i < width; ++i)
        v = (v << 1) | bs[static_cast<size_t>(pos + i)];
    return v;
}

BitString encode_circuit(const Circuit &c, const EncodingParams &p) {
    c.validate();
    if (c.k != p.k || c.r != p.r)
        throw std::invalid_argument("encode_circuit: circuit arity does not match params");
    if (c.size() > p.s)
        throw std::invalid_argument("encode_circuit: circuit exceeds gate budget");

    // Pad to exactly s gates with CONST0 inserted before the r output gates,
    // so the original outputs remain the last r nodes.
    std::vector<Gate> padded;
    int s0 = c.size();
    int pad = p.s - s0;
    int cut = s0 - c.r; // gates [cut, s0) are the output gates
    padded.reserve(static_cast<size_t>(p.s));
    for (int j = 0; j < cut; ++j)
        padded.push_back(c.gates[j]);
    for (int j = 0; j < pad; ++j)
        padded.push_back(Gate{GateOp::CONST0, 0, 0});
    for (int j = cut; j < s0; ++j) {
        Gate g = c.gates[j];
        // Operands pointing at other (shifted) output gates move with them.
        if (g.left >= c.k + cut)
            g.left += pad;
        if (g.right >= c.k + cut)
            g.right += pad;
        padded.push_back(g);
    }

    BitString out(static_cast<size_t>(p.total_len));
    for (int j = 0; j < p.s; ++j) {
        int pos = j * p.record_width();
        put_field(out, pos, 3, static_cast<uint64_t>(padded[static_cast<size_t>(j)].op));
        put_field(out, pos + 3, p.addr_width, static_cast<uint64_t>(padded[static_cast<size_t>(j)].left));
        put_field(out, pos + 3 + p.addr_width, p.addr_width,
                  static_cast<uint64_t>(padded[static_cast<size_t>(j)].right));
    }
    return out;
}

Circuit decode_circuit(const BitString &v, const EncodingParams &p) {
    if (static_cast<int>(v.size()) != p.total_len)
        throw std::invalid_argument("decode_circuit: bitstring length does not match params");
    Circuit c;
    c.k = p.k;
    c.r = p.r;
    c.gates.reserve(static_cast<size_t>(p.s));
    for (int j = 0; j < p.s; ++j) {
        int pos = j * p.record_width();
        uint64_t opv = get_field(v, pos, 3);
        GateOp op = opv <= 4 ? static_cast<GateOp>(opv) : GateOp::CONST0;
        int admissible = p.k + j;
        int left = static_cast<int>(get_field(v, pos + 3, p.addr_width) % admissible);
        int right =
            static_cast<int>(get_field(v, pos + 3 + p.addr_width, p.addr_width) % admissible);
        c.gates.push_back(Gate{op, left, right});
    }
    return c;
}

EvalResult circuit_value(const EncodingParams &p, const BitString &v, const BitString &u) {
    if (p.r != p.k + 1)
        throw std::invalid_argument("circuit_value: params must have r = k + 1");
    return eval_circuit(decode_circuit(v, p), u);
}

std::string write_netlist(const Circuit &c) {
    std::ostringstream os;
    os << "circuit k=" << c.k << " r=" << c.r << "\n";
    for (int j = 0; j < c.size(); ++j) {
        const Gate &g = c.gates[j];
        os << "g" << j << " = " << gate_op_name(g.op);
        switch (g.op) {
        case GateOp::AND:
        case GateOp::OR:
            os << " n" << g.left << " n" << g.right;
            break;
        case GateOp::NOT:
            os << " n" << g.left;
            break;
        case GateOp::CONST0:
        case GateOp::CONST1:
            break;
        }
        os << "\n";
    }
    return os.str();
}

namespace {

struct NetlistParser {
    std::istringstream in;
    int lineno = 0;

    explicit NetlistParser(const std::string &text) : in(text) {}

    [[noreturn]] void fail(const std::string &msg) const {
        throw std::runtime_error("netlist line " + std::to_string(lineno) + ": " + msg);
    }

    int parse_prefixed(const std::string &tok, char prefix) {
        if (tok.size() < 2 || tok[0] != prefix)
            fail(std::string("expected ") + prefix + "<num>, got '" + tok + "'");
        try {
            return std::stoi(tok.substr(1));
        } catch (const std::exception &) {
            fail("bad number in '" + tok + "'");
        }
    }

    Circuit run() {
        Circuit c;
        std::string line;
        bool have_header = false;
        int next_gate = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ls(line);
            std::string tok;
            if (!(ls >> tok))
                continue; // blank line
            if (tok == "circuit") {
                if (have_header)
                    fail("duplicate header");
                std::string kp, rp;
                if (!(ls >> kp >> rp) || kp.rfind("k=", 0) != 0 || rp.rfind("r=", 0) != 0)
                    fail("header must be 'circuit k=<k> r=<r>'");
                c.k = std::stoi(kp.substr(2));
                c.r = std::stoi(rp.substr(2));
                have_header = true;
                continue;
            }
            if (!have_header)
                fail("gate line before header");
            int j = parse_prefixed(tok, 'g');
            if (j != next_gate)
                fail("gates must be numbered consecutively from g0");
            ++next_gate;
            std::string eq, opname;
            if (!(ls >> eq >> opname) || eq != "=")
                fail("expected 'g<j> = <OP> ...'");
            Gate g{GateOp::AND, 0, 0};
            if (opname == "AND" || opname == "OR") {
                g.op = opname == "AND" ? GateOp::AND : GateOp::OR;
                std::string a, b;
                if (!(ls >> a >> b))
                    fail(opname + " needs two operands");
                g.left = parse_prefixed(a, 'n');
                g.right = parse_prefixed(b, 'n');
            } else if (opname == "NOT") {
                g.op = GateOp::NOT;
                std::string a;
                if (!(ls >> a))
                    fail("NOT needs one operand");
                g.left = parse_prefixed(a, 'n');
            } else if (opname == "CONST0") {
                g.op = GateOp::CONST0;
            } else if (opname == "CONST1") {
                g.op = GateOp::CONST1;
            } else {
                fail("unknown op '" + opname + "'");
            }
            std::string extra;
            if (ls >> extra)
                fail("trailing token '" + extra + "'");
            c.gates.push_back(g);
        }
        if (!have_header)
            fail("missing header");
        c.validate();
        return c;
    }
};

} // namespace

Circuit parse_netlist(const std::string &text) { return NetlistParser(text).run(); }

Circuit load_netlist(const std::string &path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open netlist file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_netlist(ss.str());
}

void save_netlist(const Circuit &c, const std::string &path) {
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write netlist file: " + path);
    f << write_netlist(c);
}

} // namespace pcgen
