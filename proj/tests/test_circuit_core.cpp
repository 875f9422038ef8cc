#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "testutil.hpp"

#include "pcgen/circuit.hpp"
#include "pcgen/rng.hpp"

#include <algorithm>
#include <map>

using namespace pcgen;

namespace {

Circuit single_and() {
    Circuit c;
    c.k = 2;
    c.r = 1;
    c.gates = {Gate{GateOp::AND, 0, 1}};
    return c;
}

} // namespace

TEST_CASE("bitstring basics") {
    BitString b = BitString::parse("0101");
    CHECK(b.size() == 4);
    CHECK(b.to_index() == 5);
    CHECK(b.to_string() == "0101");
    CHECK(BitString::from_index(5, 4) == b);
    CHECK(b.parity() == 0);
    CHECK(BitString::parse("101").parity() == 0);
    CHECK(BitString::parse("100").parity() == 1);
    CHECK((BitString::parse("01") + BitString::parse("10")).to_string() == "0110");
    CHECK(b.to_hex() == "5");
    CHECK(BitString::from_hex("5", 4) == b);
    CHECK(BitString::from_hex(BitString::parse("10100").to_hex(), 5) ==
          BitString::parse("10100"));
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(2) == 1);
    CHECK(ceil_log2(5) == 3);
}

TEST_CASE("eval_circuit on a single AND gate") {
    Circuit c = single_and();
    CHECK(eval_circuit(c, BitString::parse("11")).out.to_string() == "1");
    CHECK(eval_circuit(c, BitString::parse("10")).out.to_string() == "0");
    CHECK_THROWS_AS(eval_circuit(c, BitString::parse("101")), std::invalid_argument);
}

TEST_CASE("eval_circuit agrees with the tree-walk evaluator on all inputs") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        int k = 2 + static_cast<int>(rng.below(5)); // k <= 6
        int s = 1 + static_cast<int>(rng.below(20));
        int r = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(std::min(s, 3))));
        Circuit c = ptest::random_circuit(rng, k, s, r);
        for (uint64_t j = 0; j < (uint64_t(1) << k); ++j) {
            BitString u = BitString::from_index(j, k);
            EvalResult res = eval_circuit(c, u);
            CHECK(res.out == ptest::tree_eval(c, u));
            CHECK(res.gate_evals == static_cast<uint64_t>(c.size())); // cost accounting
        }
    }
}

TEST_CASE("encoding params fix the paper length formula") {
    EncodingParams p(4, 2, 1);
    CHECK(p.total_len == 80); // 10 * 4 * 2
    CHECK(p.addr_width == 3); // ceil_log2(6)
    // records must fit: s=2,k=8 needs 2*(3+2*4)=22 > 20 bits
    CHECK_THROWS_AS(EncodingParams(2, 8, 1), std::invalid_argument);
    CHECK_THROWS_AS(EncodingParams(1, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(EncodingParams(4, 2, 5), std::invalid_argument);
}

TEST_CASE("encode rejects circuits over the gate budget") {
    SplitMix64 rng(7);
    Circuit c = ptest::random_circuit(rng, 2, 6, 1);
    CHECK_THROWS_AS(encode_circuit(c, EncodingParams(4, 2, 1)), std::invalid_argument);
}

TEST_CASE("codec roundtrip preserves the computed function") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        int k = 1 + static_cast<int>(rng.below(8)); // k <= 8
        int s = 2 + static_cast<int>(rng.below(10));
        int r = 1 + static_cast<int>(rng.below(2));
        if (r > s)
            r = s;
        EncodingParams p(s, k, r);
        int actual_s = r + static_cast<int>(rng.below(static_cast<uint64_t>(s - r + 1)));
        Circuit c = ptest::random_circuit(rng, k, actual_s, r);
        BitString v = encode_circuit(c, p);
        CHECK(static_cast<int>(v.size()) == p.total_len);
        Circuit d = decode_circuit(v, p);
        CHECK(d.size() == p.s);
        for (uint64_t j = 0; j < (uint64_t(1) << k); ++j) {
            BitString u = BitString::from_index(j, k);
            CHECK(eval_circuit(d, u).out == eval_circuit(c, u).out);
        }
    }
}

TEST_CASE("same-shape encodings are injective over all 2-gate circuits") {
    // Exhaustive over k=2, s=2, r=1: equal encodings imply equal gate lists,
    // so functionally distinct circuits always encode apart.
    EncodingParams p(2, 2, 1);
    std::map<std::string, std::pair<Circuit, BitString>> seen;
    int total = 0;
    for (int op0 = 0; op0 < 5; ++op0)
        for (int l0 = 0; l0 < 2; ++l0)
            for (int r0 = 0; r0 < 2; ++r0)
                for (int op1 = 0; op1 < 5; ++op1)
                    for (int l1 = 0; l1 < 3; ++l1)
                        for (int r1 = 0; r1 < 3; ++r1) {
                            Circuit c;
                            c.k = 2;
                            c.r = 1;
                            auto mk = [](int op, int l, int r) {
                                Gate g{static_cast<GateOp>(op), 0, 0};
                                if (op <= 1) {
                                    g.left = l;
                                    g.right = r;
                                } else if (op == 2) {
                                    g.left = l;
                                }
                                return g;
                            };
                            c.gates = {mk(op0, l0, r0), mk(op1, l1, r1)};
                            BitString v = encode_circuit(c, p);
                            auto key = v.to_string();
                            auto table = ptest::table_oracle(c).to_string();
                            auto it = seen.find(key);
                            if (it != seen.end())
                                CHECK(ptest::table_oracle(it->second.first).to_string() == table);
                            else
                                seen.emplace(key, std::make_pair(c, v));
                            ++total;
                        }
    CHECK(total == 900);
}

TEST_CASE("decode is total") {
    EncodingParams p(4, 2, 1);
    BitString zeros(80);
    Circuit c = decode_circuit(zeros, p);
    for (uint64_t j = 0; j < 4; ++j)
        CHECK_NOTHROW(eval_circuit(c, BitString::from_index(j, 2)));

    SplitMix64 rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        BitString v = rng.bits(80);
        Circuit d = decode_circuit(v, p);
        // topological soundness of every decoded circuit
        for (int j = 0; j < d.size(); ++j) {
            CHECK(d.gates[j].left < d.k + j);
            CHECK(d.gates[j].right < d.k + j);
        }
        EvalResult res = eval_circuit(d, rng.bits(2));
        CHECK(res.out.size() == 1);
    }
    CHECK_THROWS_AS(decode_circuit(BitString(79), p), std::invalid_argument);
}

TEST_CASE("circuit_value equals direct evaluation") {
    SplitMix64 rng(2024);
    // CV(encode(C), u) = C(u), randomized over (C, u) pairs
    for (int trial = 0; trial < 500; ++trial) {
        int k = 1 + static_cast<int>(rng.below(6));
        int s = k + 1 + static_cast<int>(rng.below(8));
        EncodingParams p(s, k, k + 1);
        Circuit c = ptest::random_circuit(rng, k, k + 1 + static_cast<int>(rng.below(4)), k + 1);
        if (c.size() > p.s)
            continue;
        BitString u = rng.bits(static_cast<size_t>(k));
        CHECK(circuit_value(p, encode_circuit(c, p), u).out == eval_circuit(c, u).out);
    }
    // totality: garbage descriptions still yield k+1 output bits
    EncodingParams p(4, 3, 4);
    for (int trial = 0; trial < 200; ++trial) {
        BitString v = rng.bits(static_cast<size_t>(p.total_len));
        CHECK(circuit_value(p, v, rng.bits(3)).out.size() == 4);
    }
    CHECK_THROWS_AS(circuit_value(EncodingParams(4, 2, 1), BitString(80), BitString(2)),
                    std::invalid_argument);
}

TEST_CASE("netlist roundtrip is bit-exact") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = ptest::random_circuit(rng, 3, 8, 2);
        std::string text = write_netlist(c);
        Circuit back = parse_netlist(text);
        CHECK(write_netlist(back) == text);
        CHECK(back.k == c.k);
        CHECK(back.r == c.r);
        CHECK(back.size() == c.size());
    }
    CHECK_THROWS(parse_netlist("g0 = AND n0 n1\n"));               // missing header
    CHECK_THROWS(parse_netlist("circuit k=2 r=1\ng0 = XOR n0 n1\n")); // unknown op
    CHECK_THROWS(parse_netlist("circuit k=2 r=1\ng0 = AND n0 n5\n")); // forward ref
    CHECK_THROWS(parse_netlist("circuit k=2 r=1\ng1 = CONST0\n"));    // bad numbering
}
