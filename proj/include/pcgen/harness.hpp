#pragma once

#include "pcgen/range_oracle.hpp"
#include "pcgen/tau.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pcgen {

struct SolverVerdict {
    enum class Status { Sat, Unsat, Unknown };
    Status status = Status::Unknown;
    std::optional<std::vector<int>> model; // present only for Sat, re-verified
    std::map<std::string, double> stats;   // wall_ms plus whatever the solver reports
    std::string solver_id;
    std::string note; // timeout / parse-failure detail

    bool sat() const { return status == Status::Sat; }
    bool unsat() const { return status == Status::Unsat; }
};

const char *status_name(SolverVerdict::Status s);

struct SolverConfig {
    std::string solver_path; // empty -> $PCGEN_SOLVER
    double timeout_s = 60.0;
    std::string scratch_dir = ".";
    bool keep_files = false;
};

// Resolves the solver path (config first, then $PCGEN_SOLVER).
std::string resolve_solver_path(const SolverConfig &cfg);

// Writes DIMACS, runs the solver as a subprocess, parses the s/v lines and
// re-verifies any model before reporting it.  Trivial instances short-circuit
// without spawning the subprocess.
SolverVerdict run_solver(const CnfInstance &inst, const SolverConfig &cfg);

// Decodes the model's input block back into x (disjunct index 0 by default).
BitString decode_model_input(const CnfInstance &inst, const std::vector<int> &model,
                             int disjunct = -1);

struct ExperimentConfig {
    std::string generator_spec;
    std::vector<int> n_grid;
    std::string b_policy = "auto"; // auto | exhaustive | uniform | from-file
    int samples_per_n = 64;
    std::string b_file;
    std::string solver; // empty -> $PCGEN_SOLVER; "none" -> oracle only
    double timeout_s = 60.0;
    int oracle_cap = 24;
    std::string out_dir = "pcgen-out";
    uint64_t seed = 1;
    int disjunction_r = 0; // >= 2 enables the fdp side-by-side probe
    int workers = 1;

    static ExperimentConfig from_json_file(const std::string &path);
    static ExperimentConfig from_json(const std::string &text);
    std::string to_json() const;
};

// Runs the full grid: emits DIMACS files, collects oracle ground truth where
// the cap allows, runs the solver, and writes report.json into out_dir.
// Returns the report JSON text.  Any oracle/solver disagreement is recorded
// per row; callers treat a nonzero mismatch count as a hard failure.
std::string run_experiment(const ExperimentConfig &cfg);

} // namespace pcgen
