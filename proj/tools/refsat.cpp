// refsat: a minimal reference DPLL solver speaking the standard DIMACS
// conventions (s/v output lines, exit code 10/20).  Meant for desk-scale
// instances and as the default subprocess solver in tests; swap in any
// competition solver for real workloads.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Cnf {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

Cnf parse_dimacs(std::istream &in) {
    Cnf cnf;
    std::string line;
    bool have_header = false;
    std::vector<int> clause;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c')
            continue;
        if (line[0] == 'p') {
            std::istringstream ls(line);
            std::string p, fmt;
            int nc;
            if (!(ls >> p >> fmt >> cnf.num_vars >> nc) || fmt != "cnf") {
                std::cerr << "refsat: bad problem line\n";
                exit(1);
            }
            have_header = true;
            continue;
        }
        std::istringstream ls(line);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                cnf.clauses.push_back(clause);
                clause.clear();
            } else {
                clause.push_back(lit);
            }
        }
    }
    if (!clause.empty())
        cnf.clauses.push_back(clause);
    if (!have_header) {
        std::cerr << "refsat: missing p line\n";
        exit(1);
    }
    return cnf;
}

struct Solver {
    const Cnf &cnf;
    std::vector<int8_t> assign; // 0 unset, 1 true, -1 false
    long decisions = 0;
    long conflicts = 0;
    long propagations = 0;

    explicit Solver(const Cnf &c) : cnf(c), assign(static_cast<size_t>(c.num_vars) + 1, 0) {}

    int8_t value(int lit) const {
        int8_t v = assign[static_cast<size_t>(std::abs(lit))];
        return lit > 0 ? v : static_cast<int8_t>(-v);
    }

    // Unit propagation to fixpoint; records trail for undo; false on conflict.
    bool propagate(std::vector<int> &trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto &cl : cnf.clauses) {
                int unassigned = 0, last = 0;
                bool sat = false;
                for (int lit : cl) {
                    int8_t v = value(lit);
                    if (v == 1) {
                        sat = true;
                        break;
                    }
                    if (v == 0) {
                        ++unassigned;
                        last = lit;
                    }
                }
                if (sat)
                    continue;
                if (unassigned == 0) {
                    ++conflicts;
                    return false;
                }
                if (unassigned == 1) {
                    assign[static_cast<size_t>(std::abs(last))] = last > 0 ? 1 : -1;
                    trail.push_back(std::abs(last));
                    ++propagations;
                    changed = true;
                }
            }
        }
        return true;
    }

    int pick_branch_var() const {
        for (const auto &cl : cnf.clauses) {
            bool sat = false;
            for (int lit : cl)
                if (value(lit) == 1) {
                    sat = true;
                    break;
                }
            if (sat)
                continue;
            for (int lit : cl)
                if (value(lit) == 0)
                    return std::abs(lit);
        }
        return 0; // all clauses satisfied
    }

    bool solve() {
        std::vector<int> trail;
        if (!propagate(trail))
            return false;
        int var = pick_branch_var();
        if (var == 0)
            return true;
        for (int phase : {1, -1}) {
            ++decisions;
            std::vector<int> sub_trail;
            assign[static_cast<size_t>(var)] = static_cast<int8_t>(phase);
            sub_trail.push_back(var);
            if (propagate(sub_trail) && solve())
                return true;
            for (int v : sub_trail)
                assign[static_cast<size_t>(v)] = 0;
        }
        return false;
    }
};

} // namespace

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: refsat <file.cnf>\n";
        return 1;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << "refsat: cannot open " << argv[1] << "\n";
        return 1;
    }
    Cnf cnf = parse_dimacs(in);
    Solver solver(cnf);
    bool sat = solver.solve();
    std::cout << "c refsat 1.0\n";
    std::cout << "c decisions " << solver.decisions << "\n";
    std::cout << "c conflicts " << solver.conflicts << "\n";
    std::cout << "c propagations " << solver.propagations << "\n";
    if (sat) {
        std::cout << "s SATISFIABLE\n";
        std::string line = "v";
        for (int v = 1; v <= cnf.num_vars; ++v) {
            int8_t a = solver.assign[static_cast<size_t>(v)];
            line += " " + std::to_string(a >= 0 ? v : -v); // unset defaults to true
            if (line.size() > 72) {
                std::cout << line << "\n";
                line = "v";
            }
        }
        std::cout << line << " 0\n";
        return 10;
    }
    std::cout << "s UNSATISFIABLE\n";
    return 20;
}
