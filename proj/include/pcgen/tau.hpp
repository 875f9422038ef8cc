#pragma once

#include "pcgen/generator.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace pcgen {

inline constexpr const char *kTauEncoderVersion = "pcgen-tau-1";

struct VarBlock {
    std::string name;
    int first = 0; // 1-based variable index
    int count = 0;
};

// Refutation form of a tau statement: CNF satisfiable iff some x with
// g(x) = b exists, i.e. UNSAT iff the tau formula is a tautology.
struct CnfInstance {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    std::vector<VarBlock> var_map;
    std::map<int, int> fixed; // substituted variables -> constant
    bool trivially_unsat = false;

    // provenance
    std::string generator_spec;
    std::map<std::string, std::string> generator_extra;
    int n = 0;
    int m = 0;
    std::vector<BitString> targets;
    std::string encoder_version = kTauEncoderVersion;

    const VarBlock *find_block(const std::string &name) const;
    bool trivially_sat() const { return !trivially_unsat && clauses.empty(); }
    // True iff the (full or partial) assignment satisfies every clause.
    bool satisfied_by(const std::vector<int> &model) const;
};

// Tseitin compilation of "exists x: g(x) = b".  Variables: inputs 1..n, then
// one variable per synthesized gate in node order; m unit clauses pin the
// output nodes to b.
CnfInstance build_tau_cnf(const Generator &g, int n, const BitString &b);

// Variable-disjoint conjunction of the per-target instances: SAT iff every
// b_i is in rng(g_n).
CnfInstance build_disjunction_cnf(const Generator &g, int n,
                                  const std::vector<BitString> &bs);

// Clause-level constant substitution.  Satisfied clauses are dropped,
// falsified literals deleted; an empty clause flags the result
// trivially-UNSAT.
CnfInstance substitute(const CnfInstance &inst, const std::map<int, int> &assignment);

// build_tau_cnf for a gadget generator with the gadget input block pinned
// to v.  SAT iff every output block of b is attainable as f(v, u).
CnfInstance fix_gadget(const GadGenerator &g, int n, const BitString &b, const BitString &v);

// DIMACS with provenance comment lines; byte-stable across runs.
void write_dimacs(const CnfInstance &inst, std::ostream &os);
std::string dimacs_string(const CnfInstance &inst);
void save_dimacs(const CnfInstance &inst, const std::string &path);

} // namespace pcgen
