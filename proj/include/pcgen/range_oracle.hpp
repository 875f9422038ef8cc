#pragma once

#include "pcgen/generator.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pcgen {

struct OracleCaps {
    int max_n = 24;             // refuse enumeration beyond 2^max_n generator calls
    int max_cert_bits = 24;     // refuse certificate sweeps beyond 2^max_cert_bits checks
};

struct RangeResult {
    std::set<BitString> range;
    std::map<BitString, BitString> witness; // b -> lexicographically first preimage
    uint64_t evals = 0;
};

// Exact rng(g_n) by exhaustive evaluation; witnesses are the lexicographically
// first preimages.
RangeResult enumerate_range(const Generator &g, int n, const OracleCaps &caps = {},
                            bool with_witnesses = true);

// Lexicographically first x with g(x) = b, or nullopt.
std::optional<BitString> is_in_range(const Generator &g, int n, const BitString &b,
                                     const OracleCaps &caps = {});

// An NP set A = { y : exists z (|z| = cert_len(|y|) <= |y|^c) A_0(y, z) }.
struct NpSetSpec {
    std::string name;
    int c_exponent = 1;
    std::function<int(int)> cert_len;                                 // |z| at length m
    std::function<bool(const BitString &, const BitString &)> check;  // A_0(y, z)

    bool member(const BitString &y, const OracleCaps &caps = {}) const;
    std::optional<BitString> find_certificate(const BitString &y,
                                              const OracleCaps &caps = {}) const;
};

// Built-in probe sets.
NpSetSpec np_threshold_ones();                    // >= m-1 ones, no certificate
NpSetSpec np_pattern_match(const std::string &pattern); // 0/1/? template, no certificate
NpSetSpec np_all();
NpSetSpec np_empty();
// Circuit-backed checker A_0(y, z); the circuit has m + cert_len inputs and
// one output.  The manifest JSON declares {"name", "m", "cert_len", "c"}.
NpSetSpec np_from_netlist(const std::string &netlist_path, const std::string &manifest_path);

struct Intersection {
    BitString y;
    BitString x; // generator witness: g(x) = y
    BitString z; // membership certificate
};

// Some y in rng(g_n) ∩ A with witnesses, or nullopt if the intersection is
// empty at this n (exact).
std::optional<Intersection> intersect_np_set(const Generator &g, int n, const NpSetSpec &a,
                                             const OracleCaps &caps = {});

struct ImmunityRow {
    int n = 0;
    int m = 0;
    uint64_t a_count = 0;        // |A ∩ {0,1}^m|
    uint64_t rng_a_count = 0;    // |rng(g_n) ∩ A|
    std::optional<Intersection> first;
};

// Per-n exact counts; no asymptotic claim is made or implied.
std::vector<ImmunityRow> immunity_probe(const Generator &g, const NpSetSpec &a,
                                        const std::vector<int> &n_list,
                                        const OracleCaps &caps = {});

struct TtPreimage {
    Circuit c;          // hat_c with its first m' inputs pinned to 1
    BitString b;        // 2^k-bit truth table of c
    int size = 0;       // gate count of c
    bool exceeds_threshold = false; // size^2 > 2^k
};

// Pins the first m' inputs of hat_c to 1 (with constant propagation) and
// tabulates the result; reports the size against the 2^{k/2} threshold
// without enforcing it.
TtPreimage build_tt_preimage(const Circuit &hat_c, int m_prime, int k);

} // namespace pcgen
