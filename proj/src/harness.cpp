#include "pcgen/harness.hpp"

#include "pcgen/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unistd.h>

namespace pcgen {

namespace fs = std::filesystem;
using nlohmann::json;

const char *status_name(SolverVerdict::Status s) {
    switch (s) {
    case SolverVerdict::Status::Sat:
        return "SAT";
    case SolverVerdict::Status::Unsat:
        return "UNSAT";
    case SolverVerdict::Status::Unknown:
        return "UNKNOWN";
    }
    return "?";
}

std::string resolve_solver_path(const SolverConfig &cfg) {
    if (const char *env = std::getenv("PCGEN_SOLVER"); env && *env)
        return env;
    if (!cfg.solver_path.empty())
        return cfg.solver_path;
    throw std::runtime_error("no solver configured: set solver_path or $PCGEN_SOLVER");
}

namespace {

std::string run_command_capture(const std::string &cmd) {
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        throw std::runtime_error("failed to spawn: " + cmd);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, got);
    pclose(pipe);
    return out;
}

std::string shell_quote(const std::string &s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

std::atomic<uint64_t> scratch_counter{0};

} // namespace

BitString decode_model_input(const CnfInstance &inst, const std::vector<int> &model,
                             int disjunct) {
    std::string block = disjunct < 0 ? "x" : "d" + std::to_string(disjunct) + "/x";
    const VarBlock *blk = inst.find_block(block);
    if (!blk && disjunct < 0)
        blk = inst.find_block("d0/x");
    if (!blk)
        throw std::invalid_argument("instance has no input block '" + block + "'");
    std::vector<int8_t> val(static_cast<size_t>(inst.num_vars) + 1, -1);
    for (int lit : model) {
        int v = lit > 0 ? lit : -lit;
        if (v >= 1 && v <= inst.num_vars)
            val[static_cast<size_t>(v)] = lit > 0 ? 1 : 0;
    }
    BitString x(static_cast<size_t>(blk->count));
    for (int i = 0; i < blk->count; ++i) {
        int8_t b = val[static_cast<size_t>(blk->first + i)];
        x.set(static_cast<size_t>(i), b == 1 ? 1 : 0); // unassigned defaults to 0
    }
    return x;
}

SolverVerdict run_solver(const CnfInstance &inst, const SolverConfig &cfg) {
    SolverVerdict v;
    if (inst.trivially_unsat) {
        v.status = SolverVerdict::Status::Unsat;
        v.solver_id = "short-circuit";
        return v;
    }
    if (inst.clauses.empty()) {
        v.status = SolverVerdict::Status::Sat;
        v.model = std::vector<int>{};
        v.solver_id = "short-circuit";
        return v;
    }

    std::string solver = resolve_solver_path(cfg);
    fs::create_directories(cfg.scratch_dir);
    std::string file = (fs::path(cfg.scratch_dir) /
                        ("pcgen-" + std::to_string(::getpid()) + "-" +
                         std::to_string(scratch_counter.fetch_add(1)) + ".cnf"))
                           .string();
    save_dimacs(inst, file);

    std::ostringstream cmd;
    if (cfg.timeout_s > 0)
        cmd << "timeout " << cfg.timeout_s << " ";
    cmd << shell_quote(solver) << " " << shell_quote(file) << " 2>/dev/null";

    auto t0 = std::chrono::steady_clock::now();
    std::string output = run_command_capture(cmd.str());
    auto t1 = std::chrono::steady_clock::now();
    v.stats["wall_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    v.solver_id = solver;

    std::vector<int> model;
    bool saw_sat = false, saw_unsat = false;
    std::istringstream lines(output);
    std::string line;
    static const std::regex stat_re(R"(^c\s+.*?(conflicts|decisions|propagations)\D*?(\d+))",
                                    std::regex::icase);
    while (std::getline(lines, line)) {
        if (line.rfind("s ", 0) == 0) {
            if (line.find("UNSATISFIABLE") != std::string::npos)
                saw_unsat = true;
            else if (line.find("SATISFIABLE") != std::string::npos)
                saw_sat = true;
        } else if (line.rfind("v ", 0) == 0) {
            std::istringstream vs(line.substr(2));
            int lit;
            while (vs >> lit)
                if (lit != 0)
                    model.push_back(lit);
        } else if (line.rfind("c ", 0) == 0) {
            std::smatch m;
            if (std::regex_search(line, m, stat_re)) {
                std::string key = m[1].str();
                for (auto &ch : key)
                    ch = static_cast<char>(tolower(static_cast<unsigned char>(ch)));
                v.stats[key] = std::stod(m[2].str());
            }
        }
    }

    if (!cfg.keep_files)
        fs::remove(file);

    if (saw_unsat) {
        v.status = SolverVerdict::Status::Unsat;
    } else if (saw_sat) {
        if (inst.satisfied_by(model)) {
            v.status = SolverVerdict::Status::Sat;
            v.model = std::move(model);
        } else {
            v.status = SolverVerdict::Status::Unknown;
            v.note = "solver claimed SAT but the model fails re-verification";
        }
    } else {
        v.status = SolverVerdict::Status::Unknown;
        v.note = output.empty() ? "no solver output (missing solver or timeout)"
                                : "no status line in solver output";
    }
    return v;
}

// ---- experiment driver ------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const std::string &text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    cfg.generator_spec = j.at("generator").get<std::string>();
    cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
    cfg.b_policy = j.value("b_policy", "auto");
    cfg.samples_per_n = j.value("samples_per_n", 64);
    cfg.b_file = j.value("b_file", "");
    cfg.solver = j.value("solver", "");
    cfg.timeout_s = j.value("timeout_s", 60.0);
    cfg.oracle_cap = j.value("oracle_cap", 24);
    cfg.out_dir = j.value("out_dir", "pcgen-out");
    cfg.seed = j.value("seed", uint64_t(1));
    cfg.disjunction_r = j.value("disjunction_r", 0);
    cfg.workers = j.value("workers", 1);
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string &path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json(ss.str());
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["generator"] = generator_spec;
    j["n_grid"] = n_grid;
    j["b_policy"] = b_policy;
    j["samples_per_n"] = samples_per_n;
    j["b_file"] = b_file;
    j["solver"] = solver;
    j["timeout_s"] = timeout_s;
    j["oracle_cap"] = oracle_cap;
    j["out_dir"] = out_dir;
    j["seed"] = seed;
    j["disjunction_r"] = disjunction_r;
    j["workers"] = workers;
    return j.dump(2);
}

namespace {

std::vector<BitString> sample_targets(const ExperimentConfig &cfg, int n, int m) {
    std::vector<BitString> bs;
    if (cfg.b_policy == "from-file") {
        std::ifstream f(cfg.b_file);
        if (!f)
            throw std::runtime_error("cannot open b_file: " + cfg.b_file);
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty())
                continue;
            bs.push_back(BitString::from_hex(line, static_cast<size_t>(m)));
        }
        return bs;
    }
    bool exhaustive = cfg.b_policy == "exhaustive" || (cfg.b_policy == "auto" && m <= 14);
    if (exhaustive) {
        for (uint64_t i = 0; i < (uint64_t(1) << m); ++i)
            bs.push_back(BitString::from_index(i, m));
        return bs;
    }
    // Seeded uniform samples; the stream depends only on (seed, n).
    SplitMix64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(n)));
    for (int i = 0; i < cfg.samples_per_n; ++i)
        bs.push_back(rng.bits(static_cast<size_t>(m)));
    return bs;
}

struct InstanceTask {
    int n = 0;
    std::vector<BitString> targets; // 1 = plain tau, >1 = disjunction
    std::string file;
};

json solve_one(const CnfInstance &inst, const std::string &solver_path,
               const ExperimentConfig &cfg, const GeneratorPtr &g,
               const std::optional<bool> &ground_truth, int n) {
    json row;
    row["n"] = n;
    row["m"] = inst.m;
    json targets = json::array();
    for (const auto &b : inst.targets)
        targets.push_back(b.to_hex());
    row["b"] = targets;
    row["vars"] = inst.num_vars;
    row["clauses"] = inst.clauses.size();
    row["ground_truth"] = ground_truth ? json(*ground_truth ? "SAT" : "UNSAT") : json(nullptr);
    if (solver_path == "none") {
        row["verdict"] = nullptr;
        row["agree"] = nullptr;
        return row;
    }
    SolverConfig scfg;
    scfg.solver_path = solver_path;
    scfg.timeout_s = cfg.timeout_s;
    scfg.scratch_dir = cfg.out_dir + "/scratch";
    SolverVerdict v = run_solver(inst, scfg);
    row["verdict"] = status_name(v.status);
    json stats;
    for (const auto &[key, val] : v.stats)
        stats[key] = val;
    row["stats"] = stats;
    if (!v.note.empty())
        row["note"] = v.note;
    if (ground_truth && v.status != SolverVerdict::Status::Unknown)
        row["agree"] = (*ground_truth == v.sat());
    else
        row["agree"] = nullptr;
    if (v.sat() && v.model) {
        BitString x = decode_model_input(inst, *v.model, inst.targets.size() > 1 ? 0 : -1);
        row["model_x"] = x.to_hex();
        // A decoded preimage must reproduce the first target block.
        row["model_x_valid"] = g->evaluate(x).out == inst.targets[0];
    }
    return row;
}

} // namespace

std::string run_experiment(const ExperimentConfig &cfg) {
    GeneratorPtr g = parse_generator_spec(cfg.generator_spec);
    fs::create_directories(cfg.out_dir);

    // $PCGEN_SOLVER overrides a configured path; the literal "none" disables
    // solving entirely (oracle-only run).
    std::string solver_path = cfg.solver;
    if (solver_path != "none") {
        if (const char *env = std::getenv("PCGEN_SOLVER"); env && *env)
            solver_path = env;
        if (solver_path.empty())
            solver_path = "none";
    }

    OracleCaps caps;
    caps.max_n = cfg.oracle_cap;

    json report;
    report["config"] = json::parse(cfg.to_json());
    report["rows"] = json::array();
    report["fdp"] = json::array();
    uint64_t mismatches = 0, rows_total = 0, with_truth = 0;

    for (int n : cfg.n_grid) {
        if (!g->admits(n))
            throw std::invalid_argument(cfg.generator_spec + ": n=" + std::to_string(n) +
                                        " not on the family's grid");
        int m = g->output_len(n);
        std::vector<BitString> bs = sample_targets(cfg, n, m);

        std::optional<RangeResult> range;
        if (n <= cfg.oracle_cap)
            range = enumerate_range(*g, n, caps, false);

        // Per-target tau instances.
        struct Prepared {
            CnfInstance inst;
            std::optional<bool> truth;
            std::string file;
        };
        std::vector<Prepared> prepared;
        for (size_t i = 0; i < bs.size(); ++i) {
            Prepared p;
            p.inst = build_tau_cnf(*g, n, bs[i]);
            if (range)
                p.truth = range->range.count(bs[i]) > 0;
            p.file = (fs::path(cfg.out_dir) /
                      ("tau_n" + std::to_string(n) + "_" + std::to_string(i) + "_" +
                       bs[i].to_hex() + ".cnf"))
                         .string();
            save_dimacs(p.inst, p.file);
            prepared.push_back(std::move(p));
        }

        std::vector<json> rows(prepared.size());
        auto worker = [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                rows[i] = solve_one(prepared[i].inst, solver_path, cfg, g, prepared[i].truth, n);
                rows[i]["file"] = fs::path(prepared[i].file).filename().string();
            }
        };
        int width = cfg.workers > 1 ? cfg.workers : 1;
        if (width == 1 || prepared.size() < 2) {
            worker(0, prepared.size());
        } else {
            std::vector<std::thread> pool;
            size_t chunk = (prepared.size() + width - 1) / width;
            for (int wi = 0; wi < width; ++wi) {
                size_t lo = wi * chunk;
                size_t hi = std::min(prepared.size(), lo + chunk);
                if (lo < hi)
                    pool.emplace_back(worker, lo, hi);
            }
            for (auto &th : pool)
                th.join();
        }
        for (auto &row : rows) {
            ++rows_total;
            if (!row["agree"].is_null()) {
                ++with_truth;
                if (row["agree"] == false)
                    ++mismatches;
            }
            report["rows"].push_back(std::move(row));
        }

        // fdp probe: solver effort on a disjunction vs on its components.
        if (cfg.disjunction_r >= 2 && bs.size() >= static_cast<size_t>(cfg.disjunction_r)) {
            std::vector<BitString> group(bs.begin(), bs.begin() + cfg.disjunction_r);
            CnfInstance disj = build_disjunction_cnf(*g, n, group);
            std::string dfile =
                (fs::path(cfg.out_dir) / ("disj_n" + std::to_string(n) + ".cnf")).string();
            save_dimacs(disj, dfile);
            std::optional<bool> truth;
            if (range) {
                truth = true;
                for (const auto &b : group)
                    truth = *truth && range->range.count(b) > 0;
            }
            json probe;
            probe["n"] = n;
            probe["disjunction"] = solve_one(disj, solver_path, cfg, g, truth, n);
            probe["disjunction"]["file"] = fs::path(dfile).filename().string();
            if (probe["disjunction"]["agree"] == false)
                ++mismatches;
            probe["components"] = json::array();
            for (size_t i = 0; i < group.size(); ++i)
                probe["components"].push_back(rows[i]);
            probe["label"] = "proof-search proxy";
            report["fdp"].push_back(std::move(probe));
        }
    }

    report["summary"] = {{"rows", rows_total},
                         {"with_ground_truth", with_truth},
                         {"mismatches", mismatches}};

    std::string text = report.dump(2) + "\n";
    std::ofstream out(fs::path(cfg.out_dir) / "report.json", std::ios::binary);
    out << text;
    return text;
}

} // namespace pcgen
