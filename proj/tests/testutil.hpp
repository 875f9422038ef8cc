#pragma once

// Shared test-only oracles.  These stay independent of the library paths they
// check: the tree evaluator walks the circuit demand-driven from the outputs,
// the CNF decision procedure is a self-contained DPLL, and the model counter
// is plain exhaustive enumeration.

#include "pcgen/circuit.hpp"
#include "pcgen/rng.hpp"
#include "pcgen/tau.hpp"

#include <optional>
#include <vector>

namespace ptest {

inline uint8_t tree_eval_node(const pcgen::Circuit &c, int node, const pcgen::BitString &u,
                              std::vector<int8_t> &memo) {
    if (node < c.k)
        return u[static_cast<size_t>(node)];
    if (memo[static_cast<size_t>(node)] >= 0)
        return static_cast<uint8_t>(memo[static_cast<size_t>(node)]);
    const pcgen::Gate &g = c.gates[static_cast<size_t>(node - c.k)];
    uint8_t v = 0;
    switch (g.op) {
    case pcgen::GateOp::AND:
        v = tree_eval_node(c, g.left, u, memo) & tree_eval_node(c, g.right, u, memo);
        break;
    case pcgen::GateOp::OR:
        v = tree_eval_node(c, g.left, u, memo) | tree_eval_node(c, g.right, u, memo);
        break;
    case pcgen::GateOp::NOT:
        v = tree_eval_node(c, g.left, u, memo) ^ 1;
        break;
    case pcgen::GateOp::CONST0:
        v = 0;
        break;
    case pcgen::GateOp::CONST1:
        v = 1;
        break;
    }
    memo[static_cast<size_t>(node)] = static_cast<int8_t>(v);
    return v;
}

// Demand-driven recursive evaluator (top-down from the outputs).
inline pcgen::BitString tree_eval(const pcgen::Circuit &c, const pcgen::BitString &u) {
    std::vector<int8_t> memo(static_cast<size_t>(c.num_nodes()), -1);
    pcgen::BitString out(static_cast<size_t>(c.r));
    for (int i = 0; i < c.r; ++i)
        out.set(static_cast<size_t>(i), tree_eval_node(c, c.num_nodes() - c.r + i, u, memo));
    return out;
}

// Truth table in the module-wide order: entry j is the first output on the
// assignment whose big-endian value is j.
inline pcgen::BitString table_oracle(const pcgen::Circuit &c) {
    pcgen::BitString t(static_cast<size_t>(1) << c.k);
    for (uint64_t j = 0; j < (uint64_t(1) << c.k); ++j)
        t.set(static_cast<size_t>(j), tree_eval(c, pcgen::BitString::from_index(j, c.k))[0]);
    return t;
}

// ---- CNF decision oracle -----------------------------------------------------

namespace detail {

inline bool dpll(std::vector<int8_t> &assign, const std::vector<std::vector<int>> &clauses) {
    auto value = [&](int lit) -> int8_t {
        int8_t v = assign[static_cast<size_t>(lit > 0 ? lit : -lit)];
        if (v == 0)
            return 0;
        return (lit > 0) == (v == 1) ? int8_t(1) : int8_t(-1);
    };
    // unit propagation
    std::vector<int> trail;
    bool changed = true;
    bool conflict = false;
    while (changed && !conflict) {
        changed = false;
        for (const auto &cl : clauses) {
            int open = 0, last = 0;
            bool sat = false;
            for (int lit : cl) {
                int8_t v = value(lit);
                if (v == 1) {
                    sat = true;
                    break;
                }
                if (v == 0) {
                    ++open;
                    last = lit;
                }
            }
            if (sat)
                continue;
            if (open == 0) {
                conflict = true;
                break;
            }
            if (open == 1) {
                assign[static_cast<size_t>(last > 0 ? last : -last)] = last > 0 ? 1 : -1;
                trail.push_back(last > 0 ? last : -last);
                changed = true;
            }
        }
    }
    if (!conflict) {
        int branch = 0;
        for (const auto &cl : clauses) {
            bool sat = false;
            int open = 0;
            for (int lit : cl)
                if (value(lit) == 1) {
                    sat = true;
                    break;
                }
            if (sat)
                continue;
            for (int lit : cl)
                if (value(lit) == 0) {
                    branch = lit > 0 ? lit : -lit;
                    ++open;
                    break;
                }
            if (branch)
                break;
        }
        if (branch == 0)
            return true; // every clause satisfied
        for (int8_t phase : {int8_t(1), int8_t(-1)}) {
            assign[static_cast<size_t>(branch)] = phase;
            if (dpll(assign, clauses))
                return true;
        }
        assign[static_cast<size_t>(branch)] = 0;
    }
    for (int v : trail)
        assign[static_cast<size_t>(v)] = 0;
    return false;
}

} // namespace detail

inline bool mini_sat_raw(int num_vars, const std::vector<std::vector<int>> &clauses) {
    std::vector<int8_t> assign(static_cast<size_t>(num_vars) + 1, 0);
    return detail::dpll(assign, clauses);
}

inline std::optional<std::vector<int>> mini_sat_model(int num_vars,
                                                      const std::vector<std::vector<int>> &clauses) {
    std::vector<int8_t> assign(static_cast<size_t>(num_vars) + 1, 0);
    if (!detail::dpll(assign, clauses))
        return std::nullopt;
    std::vector<int> model;
    for (int v = 1; v <= num_vars; ++v)
        model.push_back(assign[static_cast<size_t>(v)] == -1 ? -v : v);
    return model;
}

inline bool mini_sat(const pcgen::CnfInstance &inst) {
    if (inst.trivially_unsat)
        return false;
    return mini_sat_raw(inst.num_vars, inst.clauses);
}

// Exhaustive model count; num_vars <= 20.
inline uint64_t count_models(int num_vars, const std::vector<std::vector<int>> &clauses) {
    uint64_t count = 0;
    for (uint64_t a = 0; a < (uint64_t(1) << num_vars); ++a) {
        bool ok = true;
        for (const auto &cl : clauses) {
            bool sat = false;
            for (int lit : cl) {
                int v = lit > 0 ? lit : -lit;
                bool bit = (a >> (v - 1)) & 1;
                if (bit == (lit > 0)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok)
            ++count;
    }
    return count;
}

// ---- random structures ---------------------------------------------------------

inline pcgen::Circuit random_circuit(pcgen::SplitMix64 &rng, int k, int s, int r) {
    pcgen::Circuit c;
    c.k = k;
    c.r = r;
    for (int j = 0; j < s; ++j) {
        int node = k + j;
        auto op = static_cast<pcgen::GateOp>(rng.below(5));
        pcgen::Gate g{op, 0, 0};
        switch (op) {
        case pcgen::GateOp::AND:
        case pcgen::GateOp::OR:
            g.left = static_cast<int>(rng.below(static_cast<uint64_t>(node)));
            g.right = static_cast<int>(rng.below(static_cast<uint64_t>(node)));
            break;
        case pcgen::GateOp::NOT:
            g.left = static_cast<int>(rng.below(static_cast<uint64_t>(node)));
            break;
        default:
            break;
        }
        c.gates.push_back(g);
    }
    c.validate();
    return c;
}

} // namespace ptest
