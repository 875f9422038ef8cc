// pcgen: generator metadata, tau CNF emission, oracle queries, S-T protocol
// runs, Kt queries, single-instance solving and batch experiments.

#include "pcgen/harness.hpp"
#include "pcgen/kolmogorov.hpp"
#include "pcgen/witnessing.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>

using namespace pcgen;
using nlohmann::json;

namespace {

BitString parse_b(const std::string &hex, int len) {
    return BitString::from_hex(hex, static_cast<size_t>(len));
}

int resolve_n(const Generator &g, int n_opt) {
    return n_opt >= 0 ? n_opt : g.default_n();
}

json verdict_json(const SolverVerdict &v) {
    json j;
    j["status"] = status_name(v.status);
    j["solver"] = v.solver_id;
    if (!v.note.empty())
        j["note"] = v.note;
    json stats;
    for (const auto &[key, val] : v.stats)
        stats[key] = val;
    j["stats"] = stats;
    return j;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"proof-complexity generator toolkit"};
    app.require_subcommand(1);

    std::string spec, b_hex, out_path, student_spec, config_path, cnf_path;
    std::vector<std::string> bs_hex;
    int n_opt = -1, t_max = 4, verbosity = 0;
    uint64_t seed = 1;

    // gen
    auto *gen = app.add_subcommand("gen", "print generator metadata / evaluate");
    gen->add_option("--spec", spec, "generator spec string")->required();
    gen->add_option("--n", n_opt, "input length (defaults to the family's nominal n)");
    std::string eval_hex, circuit_out;
    gen->add_option("--eval", eval_hex, "evaluate on this hex input");
    gen->add_option("--circuit-out", circuit_out, "write the synthesized circuit netlist here");
    gen->callback([&] {
        GeneratorPtr g = parse_generator_spec(spec);
        int n = resolve_n(*g, n_opt);
        json j;
        j["spec"] = g->spec_string();
        j["n"] = n;
        j["m"] = g->output_len(n);
        for (const auto &[key, val] : g->provenance())
            j[key] = val;
        if (!eval_hex.empty()) {
            BitString x = parse_b(eval_hex, n);
            EvalResult res = g->evaluate(x);
            j["eval"] = {{"x", x.to_hex()},
                         {"y", res.out.to_hex()},
                         {"gate_evals", res.gate_evals}};
        }
        if (!circuit_out.empty()) {
            Circuit c = g->synthesize_circuit(n);
            save_netlist(c, circuit_out);
            j["circuit"] = {{"file", circuit_out}, {"gates", c.size()}};
        }
        std::cout << j.dump(2) << "\n";
    });

    // tau
    auto *tau = app.add_subcommand("tau", "emit the tau CNF for (g, n, b) or a disjunction");
    tau->add_option("--spec", spec, "generator spec string")->required();
    tau->add_option("--n", n_opt, "input length");
    tau->add_option("--b", bs_hex, "target(s) in hex; several build a disjunction");
    std::string fix_v_hex;
    tau->add_option("--fix-gadget", fix_v_hex, "pin the gadget block to this hex value");
    tau->add_option("-o,--out", out_path, "output DIMACS path (default stdout)");
    tau->callback([&] {
        GeneratorPtr g = parse_generator_spec(spec);
        int n = resolve_n(*g, n_opt);
        int m = g->output_len(n);
        if (bs_hex.empty())
            throw CLI::ValidationError("--b", "at least one target required");
        std::vector<BitString> bs;
        for (const auto &h : bs_hex)
            bs.push_back(parse_b(h, m));
        CnfInstance inst;
        if (!fix_v_hex.empty()) {
            auto gad = std::dynamic_pointer_cast<const GadGenerator>(g);
            if (!gad)
                throw CLI::ValidationError("--fix-gadget", "generator is not gadget-based");
            if (bs.size() != 1)
                throw CLI::ValidationError("--fix-gadget", "needs exactly one target");
            inst = fix_gadget(*gad, n, bs[0], parse_b(fix_v_hex, gad->gadget_params().l));
        } else if (bs.size() == 1) {
            inst = build_tau_cnf(*g, n, bs[0]);
        } else {
            inst = build_disjunction_cnf(*g, n, bs);
        }
        if (out_path.empty())
            write_dimacs(inst, std::cout);
        else
            save_dimacs(inst, out_path);
    });

    // range
    auto *range = app.add_subcommand("range", "brute-force range oracle queries");
    range->add_option("--spec", spec, "generator spec string");
    range->add_option("--n", n_opt, "input length");
    bool do_enumerate = false;
    std::string check_hex, npset_name, checker_netlist, checker_manifest;
    std::vector<int> n_list;
    int cap = 24;
    range->add_flag("--enumerate", do_enumerate, "list rng(g_n) with witnesses");
    range->add_option("--check", check_hex, "hex target: report a preimage or NONE");
    range->add_option("--intersect", npset_name,
                      "probe set name (threshold-ones | pattern:<tpl> | all | empty | file)");
    range->add_option("--checker-netlist", checker_netlist, "netlist for --intersect file");
    range->add_option("--checker-manifest", checker_manifest, "manifest for --intersect file");
    range->add_option("--immunity-grid", n_list, "run the immunity probe over these n");
    range->add_option("--cap", cap, "brute-force cap (2^cap evaluations)");
    std::string tt_netlist;
    int tt_m_prime = 0, tt_k = 0;
    range->add_option("--tt-preimage", tt_netlist,
                      "netlist of hat_c: pin its first m' inputs to 1 and tabulate");
    range->add_option("--m-prime", tt_m_prime, "m' for --tt-preimage");
    range->add_option("--k", tt_k, "k for --tt-preimage");
    range->callback([&] {
        OracleCaps caps;
        caps.max_n = cap;
        json j;
        if (!tt_netlist.empty()) {
            TtPreimage res = build_tt_preimage(load_netlist(tt_netlist), tt_m_prime, tt_k);
            j["tt_preimage"] = {{"b", res.b.to_hex()},
                                {"b_len", res.b.size()},
                                {"size", res.size},
                                {"exceeds_2^(k/2)", res.exceeds_threshold},
                                {"circuit", write_netlist(res.c)}};
            std::cout << j.dump(2) << "\n";
            return;
        }
        if (spec.empty())
            throw CLI::ValidationError("--spec", "required unless --tt-preimage is used");
        GeneratorPtr g = parse_generator_spec(spec);
        int n = resolve_n(*g, n_opt);
        j["spec"] = g->spec_string();
        if (do_enumerate) {
            RangeResult res = enumerate_range(*g, n, caps);
            j["n"] = n;
            j["range_size"] = res.range.size();
            json items = json::array();
            for (const auto &y : res.range)
                items.push_back({{"y", y.to_hex()}, {"x", res.witness.at(y).to_hex()}});
            j["range"] = items;
        }
        if (!check_hex.empty()) {
            BitString b = parse_b(check_hex, g->output_len(n));
            auto x = is_in_range(*g, n, b, caps);
            j["check"] = {{"b", b.to_hex()},
                          {"witness", x ? json(x->to_hex()) : json(nullptr)}};
        }
        if (!npset_name.empty()) {
            NpSetSpec a;
            if (npset_name == "threshold-ones")
                a = np_threshold_ones();
            else if (npset_name.rfind("pattern:", 0) == 0)
                a = np_pattern_match(npset_name.substr(8));
            else if (npset_name == "all")
                a = np_all();
            else if (npset_name == "empty")
                a = np_empty();
            else if (npset_name == "file")
                a = np_from_netlist(checker_netlist, checker_manifest);
            else
                throw CLI::ValidationError("--intersect", "unknown probe set");
            if (!n_list.empty()) {
                json rows = json::array();
                for (const auto &row : immunity_probe(*g, a, n_list, caps)) {
                    json r = {{"n", row.n},
                              {"m", row.m},
                              {"a_count", row.a_count},
                              {"rng_a_count", row.rng_a_count}};
                    if (row.first)
                        r["first"] = {{"y", row.first->y.to_hex()},
                                      {"x", row.first->x.to_hex()},
                                      {"z", row.first->z.to_hex()}};
                    rows.push_back(r);
                }
                j["immunity"] = rows;
            } else {
                auto hit = intersect_np_set(*g, n, a, caps);
                j["intersect"] =
                    hit ? json({{"y", hit->y.to_hex()}, {"x", hit->x.to_hex()}, {"z", hit->z.to_hex()}})
                        : json(nullptr);
            }
        }
        std::cout << j.dump(2) << "\n";
    });

    // st
    auto *st = app.add_subcommand("st", "run the Student-Teacher protocol");
    st->add_option("--spec", spec, "generator spec string")->required();
    st->add_option("--n", n_opt, "input length");
    st->add_option("--student", student_spec, "student strategy")->required();
    st->add_option("--t-max", t_max, "round budget");
    std::string teacher = "lex";
    st->add_option("--teacher", teacher, "lex | random");
    st->add_option("--seed", seed, "seed for the random teacher");
    st->add_option("-o,--out", out_path, "write the transcript JSON here");
    st->callback([&] {
        GeneratorPtr g = parse_generator_spec(spec);
        int n = resolve_n(*g, n_opt);
        auto student = make_student(student_spec, *g);
        TeacherPolicy pol = teacher == "random" ? TeacherPolicy::SeededRandom
                                                : TeacherPolicy::LexFirst;
        StTranscript tr = run_st_protocol(*g, n, *student, t_max, pol, seed);
        std::string text = tr.to_json();
        if (out_path.empty())
            std::cout << text << "\n";
        else
            std::ofstream(out_path) << text << "\n";
        if (verbosity > 0)
            std::cerr << tr.disjunction_text();
    });

    // kt
    auto *kt = app.add_subcommand("kt", "toy-machine Kt queries");
    std::string w_hex;
    size_t w_len = 0;
    int max_len = 14, max_logt = 12;
    bool do_exact = false, do_print = false, do_range_bound = false;
    std::string range_x_hex;
    std::vector<int> scan_ns;
    kt->add_option("--w", w_hex, "target string in hex");
    kt->add_option("--w-len", w_len, "target length in bits");
    kt->add_flag("--exact", do_exact, "exact Kt by enumeration");
    kt->add_flag("--print", do_print, "literal-print upper bound");
    kt->add_option("--max-len", max_len, "program length cap (<= 20)");
    kt->add_option("--max-logt", max_logt, "log2 step cap (<= 16)");
    kt->add_flag("--range-bound", do_range_bound, "range upper bound via a registered generator");
    kt->add_option("--spec", spec, "generator for --range-bound / --scan");
    kt->add_option("--x", range_x_hex, "generator input for --range-bound (hex)");
    kt->add_option("--n", n_opt, "input length for --range-bound");
    kt->add_option("--scan", scan_ns, "closed-form bound-vs-m scan over these n");
    std::string set_members_file;
    kt->add_option("--set-min", set_members_file,
                   "Kt over a set: file of hex members, one per line (needs --w-len)");
    kt->callback([&] {
        ToyMachine machine;
        json j;
        auto record_json = [](const KtRecord &rec) {
            return json{{"w", rec.w.to_hex()},
                        {"w_len", rec.w.size()},
                        {"kt", rec.kt},
                        {"program", rec.program.to_hex()},
                        {"program_len", rec.program.size()},
                        {"steps", rec.steps},
                        {"mode", rec.mode == KtMode::Exact ? "EXACT" : "UPPER_BOUND"}};
        };
        if (do_exact || do_print) {
            BitString w = BitString::from_hex(w_hex, w_len);
            if (do_exact) {
                auto rec = kt_exact(machine, w, max_len, max_logt);
                j["exact"] = rec ? record_json(*rec) : json(nullptr);
            }
            if (do_print)
                j["print"] = record_json(kt_upper_print(machine, w));
        }
        if (do_range_bound) {
            GeneratorPtr g = parse_generator_spec(spec);
            int n = resolve_n(*g, n_opt);
            register_generator(machine, 0, g);
            BitString x = parse_b(range_x_hex, n);
            j["range_bound"] = record_json(kt_upper_range(machine, g, n, x));
        }
        if (!set_members_file.empty()) {
            std::ifstream f(set_members_file);
            if (!f)
                throw std::runtime_error("cannot open member file: " + set_members_file);
            std::vector<BitString> members;
            std::string line;
            while (std::getline(f, line))
                if (!line.empty())
                    members.push_back(BitString::from_hex(line, w_len));
            auto val = kt_set_min(machine, members, max_len, max_logt);
            j["set_min"] = val ? json({{"value", val->value},
                                       {"mode", val->mode == KtMode::Exact ? "EXACT"
                                                                           : "UPPER_BOUND"}})
                               : json(nullptr);
        }
        if (!scan_ns.empty()) {
            GeneratorPtr g = parse_generator_spec(spec);
            auto rows = kt_range_bound_scan(*g, scan_ns);
            json arr = json::array();
            for (const auto &row : rows)
                arr.push_back({{"n", row.n},
                               {"m", row.m},
                               {"bound", row.bound},
                               {"below_m", row.below_m}});
            auto cross = kt_range_bound_crossover(rows);
            j["scan"] = arr;
            j["crossover_n"] = cross ? json(*cross) : json(nullptr);
        }
        std::cout << j.dump(2) << "\n";
    });

    // solve
    auto *solve = app.add_subcommand("solve", "solve one instance with the external solver");
    solve->add_option("--cnf", cnf_path, "existing DIMACS file (otherwise --spec/--b)");
    solve->add_option("--spec", spec, "generator spec string");
    solve->add_option("--n", n_opt, "input length");
    solve->add_option("--b", bs_hex, "target(s) in hex");
    std::string solver_path;
    double timeout_s = 60.0;
    solve->add_option("--solver", solver_path, "solver executable (default $PCGEN_SOLVER)");
    solve->add_option("--timeout", timeout_s, "subprocess timeout in seconds");
    solve->callback([&] {
        SolverConfig scfg;
        scfg.solver_path = solver_path;
        scfg.timeout_s = timeout_s;
        if (!cnf_path.empty()) {
            // Solve a file directly: pass it through unchanged.
            std::string solver = resolve_solver_path(scfg);
            std::string cmd = "timeout " + std::to_string(timeout_s) + " '" + solver + "' '" +
                              cnf_path + "'";
            int rc = std::system(cmd.c_str());
            std::cout << json({{"exit", rc}}).dump(2) << "\n";
            return;
        }
        GeneratorPtr g = parse_generator_spec(spec);
        int n = resolve_n(*g, n_opt);
        int m = g->output_len(n);
        std::vector<BitString> bs;
        for (const auto &h : bs_hex)
            bs.push_back(parse_b(h, m));
        if (bs.empty())
            throw CLI::ValidationError("--b", "target required");
        CnfInstance inst = bs.size() == 1 ? build_tau_cnf(*g, n, bs[0])
                                          : build_disjunction_cnf(*g, n, bs);
        SolverVerdict v = run_solver(inst, scfg);
        json j = verdict_json(v);
        if (v.sat() && v.model) {
            BitString x = decode_model_input(inst, *v.model, bs.size() > 1 ? 0 : -1);
            j["model_x"] = x.to_hex();
            j["model_x_valid"] = g->evaluate(x).out == bs[0];
        }
        std::cout << j.dump(2) << "\n";
    });

    // report
    auto *report = app.add_subcommand("report", "run a full experiment from a config file");
    report->add_option("--config", config_path, "experiment config JSON")->required();
    report->callback([&] {
        ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
        std::cout << run_experiment(cfg);
    });

    app.add_flag("-v,--verbose", verbosity, "more diagnostics on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::cerr << "pcgen: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
