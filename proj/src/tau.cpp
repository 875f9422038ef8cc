#include "pcgen/tau.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pcgen {

const VarBlock *CnfInstance::find_block(const std::string &name) const {
    for (const auto &b : var_map)
        if (b.name == name)
            return &b;
    return nullptr;
}

bool CnfInstance::satisfied_by(const std::vector<int> &model) const {
    if (trivially_unsat)
        return false;
    std::vector<int8_t> val(static_cast<size_t>(num_vars) + 1, 0); // 0 unset, +1 true, -1 false
    for (int lit : model) {
        int v = lit > 0 ? lit : -lit;
        if (v >= 1 && v <= num_vars)
            val[static_cast<size_t>(v)] = lit > 0 ? 1 : -1;
    }
    for (const auto &cl : clauses) {
        bool sat = false;
        for (int lit : cl) {
            int v = lit > 0 ? lit : -lit;
            if (val[static_cast<size_t>(v)] == (lit > 0 ? 1 : -1)) {
                sat = true;
                break;
            }
        }
        if (!sat)
            return false;
    }
    return true;
}

namespace {

// Appends the Tseitin clauses for one circuit at a variable offset.
// Input node i -> var offset+1+i, gate node k+j -> var offset+1+k+j.
void append_tseitin(std::vector<std::vector<int>> &clauses, const Circuit &c,
                    const BitString &b, int offset) {
    auto var_of = [&](int node) { return offset + 1 + node; };
    for (int j = 0; j < c.size(); ++j) {
        const Gate &g = c.gates[j];
        int w = var_of(c.k + j);
        int a = var_of(g.left);
        int bb = var_of(g.right);
        switch (g.op) {
        case GateOp::AND:
            clauses.push_back({-w, a});
            clauses.push_back({-w, bb});
            clauses.push_back({w, -a, -bb});
            break;
        case GateOp::OR:
            clauses.push_back({w, -a});
            clauses.push_back({w, -bb});
            clauses.push_back({-w, a, bb});
            break;
        case GateOp::NOT:
            clauses.push_back({w, a});
            clauses.push_back({-w, -a});
            break;
        case GateOp::CONST0:
            clauses.push_back({-w});
            break;
        case GateOp::CONST1:
            clauses.push_back({w});
            break;
        }
    }
    for (int i = 0; i < c.r; ++i) {
        int w = var_of(c.num_nodes() - c.r + i);
        clauses.push_back({b[static_cast<size_t>(i)] ? w : -w});
    }
}

} // namespace

CnfInstance build_tau_cnf(const Generator &g, int n, const BitString &b) {
    if (!g.admits(n))
        throw std::invalid_argument(g.spec_string() + ": n=" + std::to_string(n) +
                                    " not on the family's grid");
    int m = g.output_len(n);
    if (static_cast<int>(b.size()) != m)
        throw std::invalid_argument("build_tau_cnf: target length != m(n)");

    Circuit c = g.synthesize_circuit(n);
    CnfInstance inst;
    inst.generator_spec = g.spec_string();
    inst.generator_extra = g.provenance();
    inst.n = n;
    inst.m = m;
    inst.targets = {b};
    inst.num_vars = n + c.size();
    inst.var_map = {{"x", 1, n}, {"gates", n + 1, c.size()}};
    append_tseitin(inst.clauses, c, b, 0);
    return inst;
}

CnfInstance build_disjunction_cnf(const Generator &g, int n,
                                  const std::vector<BitString> &bs) {
    if (bs.empty())
        throw std::invalid_argument("build_disjunction_cnf: empty target list");
    CnfInstance inst;
    inst.generator_spec = g.spec_string();
    inst.generator_extra = g.provenance();
    inst.n = n;
    inst.m = g.output_len(n);
    inst.targets = bs;
    for (size_t i = 0; i < bs.size(); ++i) {
        CnfInstance part = build_tau_cnf(g, n, bs[i]);
        int offset = inst.num_vars;
        std::string tag = bs.size() == 1 ? "" : "d" + std::to_string(i) + "/";
        for (const auto &blk : part.var_map)
            inst.var_map.push_back({tag + blk.name, blk.first + offset, blk.count});
        for (auto &cl : part.clauses) {
            for (int &lit : cl)
                lit += lit > 0 ? offset : -offset;
            inst.clauses.push_back(std::move(cl));
        }
        inst.num_vars += part.num_vars;
    }
    return inst;
}

CnfInstance substitute(const CnfInstance &inst, const std::map<int, int> &assignment) {
    for (const auto &[var, val] : assignment) {
        if (var < 1 || var > inst.num_vars)
            throw std::invalid_argument("substitute: variable out of range");
        if (val != 0 && val != 1)
            throw std::invalid_argument("substitute: values must be 0 or 1");
    }
    CnfInstance out = inst;
    out.clauses.clear();
    for (const auto &cl : inst.clauses) {
        std::vector<int> reduced;
        bool sat = false;
        for (int lit : cl) {
            auto it = assignment.find(lit > 0 ? lit : -lit);
            if (it == assignment.end()) {
                reduced.push_back(lit);
                continue;
            }
            bool lit_true = (it->second == 1) == (lit > 0);
            if (lit_true) {
                sat = true;
                break;
            }
            // falsified literal: drop it
        }
        if (sat)
            continue;
        if (reduced.empty())
            out.trivially_unsat = true;
        out.clauses.push_back(std::move(reduced));
    }
    for (const auto &[var, val] : assignment)
        out.fixed[var] = val;
    return out;
}

CnfInstance fix_gadget(const GadGenerator &g, int n, const BitString &b, const BitString &v) {
    const GadgetParams &gp = g.gadget_params();
    if (static_cast<int>(v.size()) != gp.l)
        throw std::invalid_argument("fix_gadget: gadget length != l");
    CnfInstance inst = build_tau_cnf(g, n, b);
    std::map<int, int> assignment;
    for (int i = 0; i < gp.l; ++i)
        assignment[1 + i] = v[static_cast<size_t>(i)];
    return substitute(inst, assignment);
}

void write_dimacs(const CnfInstance &inst, std::ostream &os) {
    os << "c generator " << inst.generator_spec << "\n";
    for (const auto &[key, val] : inst.generator_extra)
        os << "c " << key << " " << val << "\n";
    os << "c n " << inst.n << " m " << inst.m << "\n";
    for (const auto &b : inst.targets)
        os << "c b " << b.to_hex() << "\n";
    for (const auto &blk : inst.var_map)
        os << "c block " << blk.name << " " << blk.first << " " << blk.count << "\n";
    for (const auto &[var, val] : inst.fixed)
        os << "c fixed " << var << " " << val << "\n";
    os << "c encoder " << inst.encoder_version << "\n";
    os << "p cnf " << inst.num_vars << " " << inst.clauses.size() << "\n";
    for (const auto &cl : inst.clauses) {
        for (int lit : cl)
            os << lit << " ";
        os << "0\n";
    }
}

std::string dimacs_string(const CnfInstance &inst) {
    std::ostringstream os;
    write_dimacs(inst, os);
    return os.str();
}

void save_dimacs(const CnfInstance &inst, const std::string &path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write DIMACS file: " + path);
    write_dimacs(inst, f);
}

} // namespace pcgen
