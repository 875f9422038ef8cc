#pragma once

#include "pcgen/generator.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pcgen {

// Fixed toy output-tape machine (layout and constants published in
// docs/toy_machine.md, version 1).  Decoding is total: truncated fields and
// invalid opcodes halt.  4-bit opcodes:
//   0 EMIT0   1 EMIT1
//   2 LITERAL (6-bit length L, then L bits emitted verbatim; costs L steps)
//   3 REPEAT  (8-bit count C; the remainder of the code runs C times)
//   4 CALL    (4-bit routine id, Elias-gamma length, then that many argument
//              bits; emits the routine's output; costs |arg| + |out| steps)
//   5..15 HALT
class ToyMachine {
  public:
    struct Routine {
        std::string name;
        std::function<BitString(const BitString &)> fn;
    };

    struct RunResult {
        BitString output;
        uint64_t steps = 0;
        bool halted = false;   // false = step budget exhausted
        bool mismatch = false; // match-mode only: output deviated from the target
    };

    void register_routine(int id, std::string name,
                          std::function<BitString(const BitString &)> fn);
    int find_routine(const std::string &name) const; // -1 when absent
    const std::map<int, Routine> &library() const { return library_; }

    // match: abort as soon as the output stops being a prefix of *match.
    RunResult run(const BitString &code, uint64_t max_steps,
                  const BitString *match = nullptr) const;

  private:
    std::map<int, Routine> library_;
};

// Registers g's evaluator under its spec string; returns the routine id.
int register_generator(ToyMachine &machine, int id, const GeneratorPtr &g);

struct MachineConstants {
    int version = 1;
    int c0 = 10; // literal header bits (per <=63-bit chunk)
    int c1 = 2;  // range-bound program: coefficient of ceil_log2(n)
    int c2 = 9;  // range-bound program: additive constant
    int c3 = 22; // repeat program: header bits for one repeat level
    int c4 = 2;  // repeat program: extra bits per doubling of the count
};
MachineConstants machine_constants();

enum class KtMode { Exact, UpperBound };

struct KtRecord {
    BitString w;
    int kt = 0; // |program| + ceil_log2(max(steps, 1))
    BitString program;
    uint64_t steps = 0;
    KtMode mode = KtMode::UpperBound;
};

// Exact minimum of |d| + ceil_log2(t) over all programs with |d| <=
// max_prog_len (<= 20) that print w within 2^max_log_t (max_log_t <= 16)
// steps; nullopt if no in-cap program prints w.
std::optional<KtRecord> kt_exact(const ToyMachine &machine, const BitString &w,
                                 int max_prog_len, int max_log_t);

// K^t variant: minimum |d| over programs printing w within t_bound steps.
std::optional<int> k_fixed_t(const ToyMachine &machine, const BitString &w, uint64_t t_bound,
                             int max_prog_len);

// The literal-print program (chunked for |w| > 63); always defined.
KtRecord kt_upper_print(const ToyMachine &machine, const BitString &w);

// The "read x, run g" program via the registered routine; certifies
// Kt(g(x)) <= n + c1*ceil_log2(n) + c2 + ceil_log2(t).
KtRecord kt_upper_range(const ToyMachine &machine, const GeneratorPtr &g, int n,
                        const BitString &x);

// Closed-form per-n comparison of the range-bound against m(n), plus the
// crossover threshold (first listed n from which the bound stays below m).
struct RangeBoundRow {
    int n = 0;
    int m = 0;
    int bound = 0;
    bool below_m = false;
};
std::vector<RangeBoundRow> kt_range_bound_scan(const Generator &g, const std::vector<int> &ns);
std::optional<int> kt_range_bound_crossover(const std::vector<RangeBoundRow> &rows);

// Prints w repeated t times via nested REPEATs; length <= |w| + c3 +
// c4*ceil_log2(t).  Throws when t has a prime factor above 255.
BitString make_repeat_program(const BitString &w, int t);

struct KtSetValue {
    int value = 0;
    KtMode mode = KtMode::UpperBound;
};

// Kt over a nonempty member list: exact when the in-cap minimum provably
// dominates every out-of-cap member, otherwise the minimum of upper bounds.
// nullopt for the empty set.
std::optional<KtSetValue> kt_set_min(const ToyMachine &machine,
                                     const std::vector<BitString> &members, int max_prog_len,
                                     int max_log_t);

} // namespace pcgen
