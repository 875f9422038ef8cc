#pragma once

#include "pcgen/circuit.hpp"

#include <optional>
#include <vector>

namespace pcgen {

// Incremental circuit construction.  Node ids returned by the helpers are
// plain node indices into the circuit under construction.
class CircuitBuilder {
  public:
    explicit CircuitBuilder(int k) : k_(k) {}

    int input(int i) const;
    int num_nodes() const { return k_ + static_cast<int>(gates_.size()); }

    int add(GateOp op, int a = 0, int b = 0);

    int b_and(int a, int b) { return add(GateOp::AND, a, b); }
    int b_or(int a, int b) { return add(GateOp::OR, a, b); }
    int b_not(int a) { return add(GateOp::NOT, a); }
    int b_const(bool v);
    int b_copy(int a) { return add(GateOp::AND, a, a); }
    int b_xor(int a, int b);
    // sel ? t : f
    int b_mux(int sel, int t, int f);

    int b_and_chain(const std::vector<int> &nodes); // empty -> const1
    int b_or_chain(const std::vector<int> &nodes);  // empty -> const0

    // nodes[value mod nodes.size()], selected by big-endian address bits.
    int b_select_mod(const std::vector<int> &addr_bits, const std::vector<int> &nodes);

    // AND of per-bit matches against a constant (addr_bits big-endian).
    int b_eq_const(const std::vector<int> &addr_bits, uint64_t value);

    // Appends one copy gate per output so the outputs are the last r nodes.
    Circuit finish(const std::vector<int> &outputs);

  private:
    int k_;
    std::vector<Gate> gates_;
    std::optional<int> const0_, const1_;
};

// Emits gates computing eval_circuit(decode_circuit(v, p), u) for symbolic
// v and u wires; returns the p.r output node ids.  Mirrors the codec's
// totality rules (invalid opcodes -> CONST0, addresses reduced modulo the
// admissible node count) gate for gate.
std::vector<int> emit_universal_eval(CircuitBuilder &bld, const EncodingParams &p,
                                     const std::vector<int> &v_nodes,
                                     const std::vector<int> &u_nodes);

} // namespace pcgen
