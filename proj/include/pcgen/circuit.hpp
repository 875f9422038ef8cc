#pragma once

#include "pcgen/bitstring.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pcgen {

// DeMorgan basis, fan-in 2.  Opcode values are the on-wire codec values;
// 5..7 are invalid on the wire and decode to CONST0.
enum class GateOp : uint8_t { AND = 0, OR = 1, NOT = 2, CONST0 = 3, CONST1 = 4 };

const char *gate_op_name(GateOp op);

struct Gate {
    GateOp op;
    int left = 0;  // node index; ignored by CONST*
    int right = 0; // node index; ignored by NOT and CONST*
};

// Boolean circuit with k inputs, r outputs and an ordered gate list.
// Nodes 0..k-1 are the inputs, node k+j is gate j.  The outputs are the
// last r nodes.  Every operand must refer to a strictly earlier node.
struct Circuit {
    int k = 0;
    int r = 0;
    std::vector<Gate> gates;

    int size() const { return static_cast<int>(gates.size()); }
    int num_nodes() const { return k + size(); }

    // Throws std::invalid_argument on any structural violation.
    void validate() const;
};

struct EvalResult {
    BitString out;
    uint64_t gate_evals = 0;
};

// Evaluates gate-by-gate in node order.  u.size() must equal c.k.
EvalResult eval_circuit(const Circuit &c, const BitString &u);

// Fixed-width binary codec: s gate records of (3-bit opcode, two
// addr_width-bit operand addresses), big-endian within fields, zero-padded
// to exactly 10 * s * ceil_log2(s) bits.
struct EncodingParams {
    int s = 0;          // gate budget
    int k = 0;          // input count
    int r = 0;          // output count
    int addr_width = 0; // ceil_log2(k + s)
    int total_len = 0;  // 10 * s * ceil_log2(s)

    EncodingParams(int s, int k, int r);

    int record_width() const { return 3 + 2 * addr_width; }
};

BitString encode_circuit(const Circuit &c, const EncodingParams &p);

// Total: every correctly-sized bitstring decodes to some valid circuit.
// Invalid opcodes become CONST0; operand addresses are reduced modulo the
// number of admissible (earlier) nodes.
Circuit decode_circuit(const BitString &v, const EncodingParams &p);

// CV_{a,k}: eval_circuit(decode_circuit(v, p), u).  Requires p.r == p.k + 1.
EvalResult circuit_value(const EncodingParams &p, const BitString &v, const BitString &u);

// Netlist text format.
//   circuit k=<k> r=<r>
//   g<j> = AND n<a> n<b>
//   g<j> = OR n<a> n<b>
//   g<j> = NOT n<a>
//   g<j> = CONST0
//   g<j> = CONST1
std::string write_netlist(const Circuit &c);
Circuit parse_netlist(const std::string &text);
Circuit load_netlist(const std::string &path);
void save_netlist(const Circuit &c, const std::string &path);

} // namespace pcgen
