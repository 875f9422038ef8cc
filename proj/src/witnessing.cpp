#include "pcgen/witnessing.hpp"

#include "pcgen/rng.hpp"

#include "json.hpp"

#include <sstream>
#include <stdexcept>

namespace pcgen {

std::string StTranscript::to_json() const {
    nlohmann::json j;
    j["generator"] = generator_spec;
    j["n"] = n;
    j["m"] = m;
    j["t_max"] = t_max;
    j["success"] = success;
    j["success_round"] = success_round;
    j["error"] = error;
    j["rounds"] = nlohmann::json::array();
    for (const auto &r : rounds) {
        nlohmann::json jr;
        jr["b"] = r.candidate.to_hex();
        jr["b_len"] = r.candidate.size();
        if (r.counterexample) {
            jr["x"] = r.counterexample->to_hex();
            jr["x_len"] = r.counterexample->size();
        } else {
            jr["accept"] = true;
        }
        j["rounds"].push_back(jr);
    }
    return j.dump(2);
}

StTranscript StTranscript::from_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    StTranscript tr;
    tr.generator_spec = j.at("generator").get<std::string>();
    tr.n = j.at("n").get<int>();
    tr.m = j.at("m").get<int>();
    tr.t_max = j.at("t_max").get<int>();
    tr.success = j.at("success").get<bool>();
    tr.success_round = j.at("success_round").get<int>();
    tr.error = j.value("error", "");
    for (const auto &jr : j.at("rounds")) {
        StRound r;
        r.candidate = BitString::from_hex(jr.at("b").get<std::string>(),
                                          jr.at("b_len").get<size_t>());
        if (jr.contains("x"))
            r.counterexample = BitString::from_hex(jr.at("x").get<std::string>(),
                                                   jr.at("x_len").get<size_t>());
        tr.rounds.push_back(std::move(r));
    }
    return tr;
}

std::string StTranscript::disjunction_text() const {
    std::ostringstream os;
    for (size_t i = 0; i < rounds.size(); ++i) {
        if (i)
            os << "  OR\n";
        os << "g(x_" << i + 1 << ") != S(1^(" << n << ")";
        for (size_t h = 1; h <= i; ++h)
            os << ", x_" << h;
        os << ")";
        if (!rounds[i].counterexample)
            os << "   [true: candidate " << rounds[i].candidate.to_hex() << " has no preimage]";
        os << "\n";
    }
    return os.str();
}

namespace {

class OracleComplementStudent : public Student {
  public:
    OracleComplementStudent(const Generator &g, OracleCaps caps) : g_(g), caps_(caps) {}

    std::string name() const override { return "oracle_complement"; }

    BitString next_candidate(int n, int m, const std::vector<BitString> &) override {
        RangeResult rng = enumerate_range(g_, n, caps_, false);
        uint64_t total = uint64_t(1) << m;
        for (uint64_t i = 0; i < total; ++i) {
            BitString y = BitString::from_index(i, m);
            if (!rng.range.count(y))
                return y;
        }
        // Unreachable for stretching maps: |rng| <= 2^n < 2^m.
        throw std::logic_error("oracle_complement: stretching map with full range");
    }

  private:
    const Generator &g_;
    OracleCaps caps_;
};

class ConstantStudent : public Student {
  public:
    explicit ConstantStudent(BitString b) : b_(std::move(b)) {}
    std::string name() const override { return "constant:" + b_.to_hex(); }
    BitString next_candidate(int, int, const std::vector<BitString> &) override { return b_; }

  private:
    BitString b_;
};

class FlipLastStudent : public Student {
  public:
    explicit FlipLastStudent(const Generator &g) : g_(g) {}

    std::string name() const override { return "flip_last"; }

    BitString next_candidate(int, int m, const std::vector<BitString> &history) override {
        if (history.empty())
            return BitString(static_cast<size_t>(m));
        BitString b = g_.evaluate(history.back()).out;
        b.set(b.size() - 1, b[b.size() - 1] ^ 1);
        return b;
    }

  private:
    const Generator &g_;
};

class IncrementStudent : public Student {
  public:
    std::string name() const override { return "increment"; }
    BitString next_candidate(int, int m, const std::vector<BitString> &history) override {
        return BitString::from_index(history.size(), m);
    }
};

} // namespace

std::unique_ptr<Student> make_student(const std::string &spec, const Generator &g,
                                      const OracleCaps &caps) {
    if (spec == "oracle_complement")
        return std::make_unique<OracleComplementStudent>(g, caps);
    if (spec.rfind("constant:", 0) == 0) {
        std::string hex = spec.substr(9);
        int m = g.output_len(g.default_n());
        return std::make_unique<ConstantStudent>(BitString::from_hex(hex, static_cast<size_t>(m)));
    }
    if (spec == "flip_last")
        return std::make_unique<FlipLastStudent>(g);
    if (spec == "increment")
        return std::make_unique<IncrementStudent>();
    throw std::invalid_argument("unknown student '" + spec + "'");
}

namespace {

std::optional<BitString> teacher_reply(const Generator &g, int n, const BitString &b,
                                       TeacherPolicy policy, SplitMix64 &rng,
                                       const OracleCaps &caps) {
    if (policy == TeacherPolicy::LexFirst)
        return is_in_range(g, n, b, caps);
    // Adversarial mode: uniform choice among all preimages.
    std::vector<BitString> preimages;
    uint64_t total = uint64_t(1) << n;
    for (uint64_t i = 0; i < total; ++i) {
        BitString x = BitString::from_index(i, n);
        if (g.evaluate(x).out == b)
            preimages.push_back(std::move(x));
    }
    if (preimages.empty())
        return std::nullopt;
    return preimages[static_cast<size_t>(rng.below(preimages.size()))];
}

} // namespace

StTranscript run_st_protocol(const Generator &g, int n, Student &student, int t_max,
                             TeacherPolicy policy, uint64_t seed, const OracleCaps &caps) {
    if (n > caps.max_n)
        throw std::invalid_argument("st protocol: n exceeds brute-force cap");
    StTranscript tr;
    tr.generator_spec = g.spec_string();
    tr.n = n;
    tr.m = g.output_len(n);
    tr.t_max = t_max;
    SplitMix64 rng(seed);
    std::vector<BitString> history;
    for (int round = 1; round <= t_max; ++round) {
        BitString b = student.next_candidate(n, tr.m, history);
        if (static_cast<int>(b.size()) != tr.m) {
            tr.error = "student '" + student.name() + "' emitted a candidate of length " +
                       std::to_string(b.size()) + ", expected " + std::to_string(tr.m);
            break;
        }
        std::optional<BitString> x = teacher_reply(g, n, b, policy, rng, caps);
        tr.rounds.push_back(StRound{b, x});
        if (!x) {
            tr.success = true;
            tr.success_round = round;
            break;
        }
        history.push_back(*x);
    }
    return tr;
}

VerifyReport verify_transcript(const StTranscript &tr, const Generator &g,
                               const OracleCaps &caps) {
    VerifyReport rep;
    auto violation = [&rep](const std::string &msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    if (tr.n > caps.max_n) {
        violation("n exceeds brute-force cap");
        return rep;
    }
    if (tr.generator_spec != g.spec_string())
        violation("generator spec mismatch: " + tr.generator_spec + " vs " + g.spec_string());
    if (!g.admits(tr.n))
        violation("n not on the generator's grid");
    else if (g.output_len(tr.n) != tr.m)
        violation("recorded m does not match the generator");
    if (static_cast<int>(tr.rounds.size()) > tr.t_max)
        violation("more rounds than t_max");

    for (size_t i = 0; i < tr.rounds.size(); ++i) {
        const StRound &r = tr.rounds[i];
        std::string where = "round " + std::to_string(i + 1);
        if (static_cast<int>(r.candidate.size()) != tr.m) {
            violation(where + ": candidate length != m");
            continue;
        }
        if (r.counterexample) {
            if (static_cast<int>(r.counterexample->size()) != tr.n) {
                violation(where + ": counterexample length != n");
                continue;
            }
            if (g.evaluate(*r.counterexample).out != r.candidate)
                violation(where + ": g(x) != b, counterexample does not refute");
        } else {
            if (i + 1 != tr.rounds.size())
                violation(where + ": ACCEPT must terminate the transcript");
            if (is_in_range(g, tr.n, r.candidate, caps))
                violation(where + ": ACCEPT on a candidate that has a preimage");
        }
    }

    bool has_accept = !tr.rounds.empty() && !tr.rounds.back().counterexample;
    if (tr.success != has_accept)
        violation("success flag inconsistent with the final round");
    if (tr.success && tr.success_round != static_cast<int>(tr.rounds.size()))
        violation("success_round does not point at the ACCEPT round");
    return rep;
}

} // namespace pcgen
