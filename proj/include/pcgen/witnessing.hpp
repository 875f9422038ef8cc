#pragma once

#include "pcgen/generator.hpp"
#include "pcgen/range_oracle.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pcgen {

// One round of the Student-Teacher range-avoidance game: the candidate and
// either a counterexample preimage or ACCEPT (no reply).
struct StRound {
    BitString candidate;
    std::optional<BitString> counterexample; // nullopt = ACCEPT
};

struct StTranscript {
    std::string generator_spec;
    int n = 0;
    int m = 0;
    int t_max = 0;
    std::vector<StRound> rounds;
    bool success = false;
    int success_round = 0;   // 1-based; 0 when the student failed
    std::string error;       // protocol error note, empty if none

    std::string to_json() const;
    static StTranscript from_json(const std::string &text);

    // The instantiated universal disjunction the transcript witnesses:
    // one line per round, the true disjunct marked.
    std::string disjunction_text() const;
};

class Student {
  public:
    virtual ~Student() = default;
    virtual std::string name() const = 0;
    // history holds the teacher's counterexamples x_1..x_{i-1}.
    virtual BitString next_candidate(int n, int m, const std::vector<BitString> &history) = 0;
};

// Registry (see README for the strategy list):
//   oracle_complement  - enumerates the range, outputs the first non-range string
//   constant:<hex>     - always the same candidate
//   flip_last          - 0^m first, then g(x_prev) with the last bit flipped
//   increment          - candidate i is the m-bit encoding of i-1
std::unique_ptr<Student> make_student(const std::string &spec, const Generator &g,
                                      const OracleCaps &caps = {});

enum class TeacherPolicy {
    LexFirst,     // deterministic canonical counterexample
    SeededRandom, // adversarial mode: seeded uniform choice among preimages
};

StTranscript run_st_protocol(const Generator &g, int n, Student &student, int t_max,
                             TeacherPolicy policy = TeacherPolicy::LexFirst,
                             uint64_t seed = 0, const OracleCaps &caps = {});

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Re-checks every reply (counterexamples by evaluation, ACCEPT by exhaustive
// search) and the transcript's structural invariants.
VerifyReport verify_transcript(const StTranscript &tr, const Generator &g,
                               const OracleCaps &caps = {});

} // namespace pcgen
