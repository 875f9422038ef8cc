#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "testutil.hpp"

#include "pcgen/harness.hpp"
#include "pcgen/rng.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pcgen;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string solver_path() {
    const char *env = std::getenv("PCGEN_SOLVER");
    REQUIRE_MESSAGE(env != nullptr, "PCGEN_SOLVER must point at a DIMACS solver");
    return env;
}

// Strips the volatile keys before comparing two report JSON trees.
void scrub_timing(json &j) {
    if (j.is_object()) {
        j.erase("stats");
        j.erase("wall_ms");
        for (auto &[key, val] : j.items())
            scrub_timing(val);
    } else if (j.is_array()) {
        for (auto &item : j)
            scrub_timing(item);
    }
}

std::string write_fake_solver(const std::string &name, const std::string &body) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream f(p);
    f << "#!/bin/sh\n" << body;
    f.close();
    fs::permissions(p, fs::perms::owner_all);
    return p.string();
}

// $PCGEN_SOLVER overrides the config path, so fake-solver cases must pin it.
struct EnvGuard {
    std::string saved;
    bool had;

    explicit EnvGuard(const std::string &value) {
        const char *old = std::getenv("PCGEN_SOLVER");
        had = old != nullptr;
        if (had)
            saved = old;
        setenv("PCGEN_SOLVER", value.c_str(), 1);
    }
    ~EnvGuard() {
        if (had)
            setenv("PCGEN_SOLVER", saved.c_str(), 1);
        else
            unsetenv("PCGEN_SOLVER");
    }
};

} // namespace

TEST_CASE("trivial instances short-circuit without a subprocess") {
    SolverConfig cfg;
    cfg.solver_path = "/nonexistent/solver"; // must never be invoked

    CnfInstance empty;
    empty.num_vars = 3;
    SolverVerdict v = run_solver(empty, cfg);
    CHECK(v.status == SolverVerdict::Status::Sat);
    CHECK(v.solver_id == "short-circuit");

    CnfInstance dead;
    dead.num_vars = 1;
    dead.clauses = {{1}};
    dead.trivially_unsat = true;
    v = run_solver(dead, cfg);
    CHECK(v.status == SolverVerdict::Status::Unsat);
}

TEST_CASE("solver verdicts match the oracle on parity instances") {
    auto g = make_parity_gen(10);
    RangeResult range = enumerate_range(*g, 10);
    SolverConfig cfg;
    cfg.solver_path = solver_path();
    cfg.scratch_dir = "harness-scratch";

    // in-range target: SAT with a decodable preimage
    BitString b_in = g->evaluate(BitString::parse("1100110011")).out;
    CnfInstance sat = build_tau_cnf(*g, 10, b_in);
    SolverVerdict v = run_solver(sat, cfg);
    CHECK(v.status == SolverVerdict::Status::Sat);
    REQUIRE(v.model.has_value());
    BitString x = decode_model_input(sat, *v.model);
    CHECK(g->evaluate(x).out == b_in);
    CHECK(v.stats.count("wall_ms") == 1);
    CHECK(v.stats.count("decisions") == 1); // refsat reports decisions/conflicts

    // out-of-range target: UNSAT
    BitString b_out = b_in;
    b_out.set(10, b_out[10] ^ 1);
    REQUIRE(range.range.count(b_out) == 0);
    v = run_solver(build_tau_cnf(*g, 10, b_out), cfg);
    CHECK(v.status == SolverVerdict::Status::Unsat);

    fs::remove_all("harness-scratch");
}

TEST_CASE("malformed or lying solvers yield UNKNOWN") {
    auto g = make_parity_gen(4);
    CnfInstance inst = build_tau_cnf(*g, 4, BitString(5));
    SolverConfig cfg;
    cfg.scratch_dir = "harness-scratch2";

    // no status line at all
    SolverVerdict v;
    {
        EnvGuard env(write_fake_solver("pcgen-quiet.sh", "exit 0\n"));
        v = run_solver(inst, cfg);
    }
    CHECK(v.status == SolverVerdict::Status::Unknown);
    CHECK_FALSE(v.note.empty());

    // claims SAT with a bogus model: rejected by re-verification
    {
        EnvGuard env(write_fake_solver(
            "pcgen-liar.sh", "echo 's SATISFIABLE'\necho 'v 1 2 3 4 5 0'\nexit 10\n"));
        v = run_solver(inst, cfg);
    }
    CHECK(v.status == SolverVerdict::Status::Unknown);
    CHECK(v.note.find("re-verification") != std::string::npos);

    // model re-verification also guards substituted instances
    cfg.solver_path = solver_path();
    auto toy = make_toy_gad(2, 2);
    BitString b = toy->evaluate(BitString(8)).out;
    CnfInstance fixed = fix_gadget(*toy, 8, b, BitString(2));
    v = run_solver(fixed, cfg);
    CHECK(v.status == SolverVerdict::Status::Sat);

    fs::remove_all("harness-scratch2");
}

TEST_CASE("solver timeout reports UNKNOWN") {
    auto g = make_parity_gen(4);
    CnfInstance inst = build_tau_cnf(*g, 4, BitString(5));
    SolverConfig cfg;
    cfg.scratch_dir = "harness-scratch3";
    cfg.timeout_s = 0.2;
    SolverVerdict v;
    {
        EnvGuard env(write_fake_solver("pcgen-sleepy.sh", "sleep 5\necho 's SATISFIABLE'\n"));
        v = run_solver(inst, cfg);
    }
    CHECK(v.status == SolverVerdict::Status::Unknown);
    fs::remove_all("harness-scratch3");
}

TEST_CASE("experiment config JSON roundtrip") {
    ExperimentConfig cfg;
    cfg.generator_spec = "parity:n=4";
    cfg.n_grid = {4, 6};
    cfg.seed = 99;
    cfg.disjunction_r = 2;
    ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.generator_spec == cfg.generator_spec);
    CHECK(back.n_grid == cfg.n_grid);
    CHECK(back.seed == cfg.seed);
    CHECK(back.disjunction_r == cfg.disjunction_r);
}

TEST_CASE("experiment runs the grid with full oracle agreement") {
    ExperimentConfig cfg;
    cfg.generator_spec = "parity:n=4";
    cfg.n_grid = {4, 6};
    cfg.b_policy = "auto"; // exhaustive at these m
    cfg.solver = solver_path();
    cfg.out_dir = "exp-out-a";
    cfg.seed = 5;
    cfg.disjunction_r = 2;
    cfg.workers = 2;

    json report = json::parse(run_experiment(cfg));
    CHECK(report["summary"]["rows"] == (1 << 5) + (1 << 7));
    CHECK(report["summary"]["mismatches"] == 0);
    CHECK(report["summary"]["with_ground_truth"] == (1 << 5) + (1 << 7));
    CHECK(report["fdp"].size() == 2);
    for (const auto &row : report["rows"]) {
        CHECK(row["agree"] == true);
        if (row["verdict"] == "SAT")
            CHECK(row["model_x_valid"] == true);
    }
    // fdp probe reports the disjunction next to its components
    for (const auto &probe : report["fdp"]) {
        CHECK(probe["components"].size() == 2);
        CHECK(probe["label"] == "proof-search proxy");
    }
    fs::remove_all("exp-out-a");
}

TEST_CASE("experiments are reproducible byte for byte") {
    ExperimentConfig cfg;
    cfg.generator_spec = "toygad:l=2,k=2,t=3";
    cfg.n_grid = {8};
    cfg.b_policy = "uniform";
    cfg.samples_per_n = 12;
    cfg.solver = solver_path();
    cfg.seed = 31337;

    cfg.out_dir = "exp-rep-1";
    std::string r1 = run_experiment(cfg);
    cfg.out_dir = "exp-rep-2";
    std::string r2 = run_experiment(cfg);

    // identical DIMACS bytes
    std::vector<fs::path> files1;
    for (const auto &entry : fs::directory_iterator("exp-rep-1"))
        if (entry.path().extension() == ".cnf")
            files1.push_back(entry.path().filename());
    CHECK_FALSE(files1.empty());
    for (const auto &name : files1) {
        std::ifstream f1(fs::path("exp-rep-1") / name, std::ios::binary);
        std::ifstream f2(fs::path("exp-rep-2") / name, std::ios::binary);
        REQUIRE(f2.good());
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        CHECK(s1.str() == s2.str());
    }

    // identical reports modulo timing
    json j1 = json::parse(r1), j2 = json::parse(r2);
    scrub_timing(j1);
    j1.erase("config");
    scrub_timing(j2);
    j2.erase("config");
    CHECK(j1 == j2);

    fs::remove_all("exp-rep-1");
    fs::remove_all("exp-rep-2");
}

TEST_CASE("off-grid n in a config is rejected") {
    ExperimentConfig cfg;
    cfg.generator_spec = "toygad:l=2,k=2,t=3";
    cfg.n_grid = {9};
    cfg.solver = "none";
    cfg.out_dir = "exp-bad";
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    fs::remove_all("exp-bad");
}
