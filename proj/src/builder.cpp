#include "pcgen/builder.hpp"

#include <stdexcept>

namespace pcgen {

int CircuitBuilder::input(int i) const {
    if (i < 0 || i >= k_)
        throw std::invalid_argument("builder: input index out of range");
    return i;
}

int CircuitBuilder::add(GateOp op, int a, int b) {
    int node = num_nodes();
    if ((op == GateOp::AND || op == GateOp::OR) && (a >= node || b >= node))
        throw std::invalid_argument("builder: operand not yet defined");
    if (op == GateOp::NOT && a >= node)
        throw std::invalid_argument("builder: operand not yet defined");
    gates_.push_back(Gate{op, a, b});
    return node;
}

int CircuitBuilder::b_const(bool v) {
    auto &cache = v ? const1_ : const0_;
    if (!cache)
        cache = add(v ? GateOp::CONST1 : GateOp::CONST0);
    return *cache;
}

int CircuitBuilder::b_xor(int a, int b) {
    return b_and(b_or(a, b), b_not(b_and(a, b)));
}

int CircuitBuilder::b_mux(int sel, int t, int f) {
    return b_or(b_and(sel, t), b_and(b_not(sel), f));
}

int CircuitBuilder::b_and_chain(const std::vector<int> &nodes) {
    if (nodes.empty())
        return b_const(true);
    int acc = nodes[0];
    for (size_t i = 1; i < nodes.size(); ++i)
        acc = b_and(acc, nodes[i]);
    return acc;
}

int CircuitBuilder::b_or_chain(const std::vector<int> &nodes) {
    if (nodes.empty())
        return b_const(false);
    int acc = nodes[0];
    for (size_t i = 1; i < nodes.size(); ++i)
        acc = b_or(acc, nodes[i]);
    return acc;
}

int CircuitBuilder::b_eq_const(const std::vector<int> &addr_bits, uint64_t value) {
    std::vector<int> matches;
    int w = static_cast<int>(addr_bits.size());
    matches.reserve(addr_bits.size());
    for (int i = 0; i < w; ++i) {
        uint8_t bit = static_cast<uint8_t>((value >> (w - 1 - i)) & 1);
        matches.push_back(bit ? addr_bits[static_cast<size_t>(i)]
                              : b_not(addr_bits[static_cast<size_t>(i)]));
    }
    return b_and_chain(matches);
}

int CircuitBuilder::b_select_mod(const std::vector<int> &addr_bits,
                                 const std::vector<int> &nodes) {
    if (nodes.empty())
        throw std::invalid_argument("builder: select over empty node list");
    uint64_t space = uint64_t(1) << addr_bits.size();
    uint64_t count = nodes.size();
    std::vector<int> terms;
    for (uint64_t i = 0; i < count; ++i) {
        std::vector<int> eqs;
        for (uint64_t val = i; val < space; val += count)
            eqs.push_back(b_eq_const(addr_bits, val));
        terms.push_back(b_and(b_or_chain(eqs), nodes[static_cast<size_t>(i)]));
    }
    return b_or_chain(terms);
}

Circuit CircuitBuilder::finish(const std::vector<int> &outputs) {
    if (outputs.empty())
        throw std::invalid_argument("builder: circuit needs at least one output");
    Circuit c;
    c.k = k_;
    c.r = static_cast<int>(outputs.size());
    c.gates = gates_;
    for (int node : outputs) {
        if (node < 0 || node >= k_ + static_cast<int>(c.gates.size()))
            throw std::invalid_argument("builder: output node out of range");
        c.gates.push_back(Gate{GateOp::AND, node, node});
    }
    c.validate();
    return c;
}

std::vector<int> emit_universal_eval(CircuitBuilder &bld, const EncodingParams &p,
                                     const std::vector<int> &v_nodes,
                                     const std::vector<int> &u_nodes) {
    if (static_cast<int>(v_nodes.size()) != p.total_len)
        throw std::invalid_argument("universal eval: description wire count mismatch");
    if (static_cast<int>(u_nodes.size()) != p.k)
        throw std::invalid_argument("universal eval: input wire count mismatch");

    std::vector<int> node_val = u_nodes;
    node_val.reserve(static_cast<size_t>(p.k + p.s));
    for (int j = 0; j < p.s; ++j) {
        int pos = j * p.record_width();
        std::vector<int> op_bits = {v_nodes[pos], v_nodes[pos + 1], v_nodes[pos + 2]};
        std::vector<int> left_bits(v_nodes.begin() + pos + 3,
                                   v_nodes.begin() + pos + 3 + p.addr_width);
        std::vector<int> right_bits(v_nodes.begin() + pos + 3 + p.addr_width,
                                    v_nodes.begin() + pos + 3 + 2 * p.addr_width);

        int left = bld.b_select_mod(left_bits, node_val);
        int right = bld.b_select_mod(right_bits, node_val);

        int is_and = bld.b_eq_const(op_bits, 0);
        int is_or = bld.b_eq_const(op_bits, 1);
        int is_not = bld.b_eq_const(op_bits, 2);
        int is_const1 = bld.b_eq_const(op_bits, 4);
        // CONST0 and the invalid opcodes 5..7 contribute nothing.
        int val = bld.b_or_chain({
            bld.b_and(is_and, bld.b_and(left, right)),
            bld.b_and(is_or, bld.b_or(left, right)),
            bld.b_and(is_not, bld.b_not(left)),
            is_const1,
        });
        node_val.push_back(val);
    }
    return std::vector<int>(node_val.end() - p.r, node_val.end());
}

} // namespace pcgen
