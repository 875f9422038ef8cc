#pragma once

#include "pcgen/builder.hpp"
#include "pcgen/circuit.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pcgen {

// A named, parameterized stretching function family g_n : {0,1}^n -> {0,1}^m
// with m(n) > n.  Each family publishes its admissible n-grid; evaluate and
// synthesize_circuit agree on every admissible input.
class Generator {
  public:
    virtual ~Generator() = default;

    const std::string &name() const { return name_; }
    const std::map<std::string, long long> &params() const { return params_; }

    // Canonical CLI spec form, e.g. "gadsq:k=2".
    std::string spec_string() const;

    // Extra material needed to reproduce the instance (e.g. gadget hex);
    // carried into CNF provenance headers.
    virtual std::map<std::string, std::string> provenance() const { return {}; }

    virtual bool admits(int n) const = 0;
    virtual int output_len(int n) const = 0;

    // The family's nominal n (smallest admissible, or the declared one).
    virtual int default_n() const = 0;

    virtual EvalResult evaluate(const BitString &x) const = 0;
    virtual Circuit synthesize_circuit(int n) const = 0;

    std::vector<int> grid(int lo, int hi) const;

  protected:
    Generator(std::string name, std::map<std::string, long long> params)
        : name_(std::move(name)), params_(std::move(params)) {}

    void check_admits(int n) const;
    void check_stretch(int n) const; // throws unless m(n) > n

  private:
    std::string name_;
    std::map<std::string, long long> params_;
};

using GeneratorPtr = std::shared_ptr<const Generator>;

// ---- concrete families ----------------------------------------------------

// x |-> x . parity(x); admits every n >= 1.
GeneratorPtr make_parity_gen(int nominal_n);

// Encoded size-s k-input circuit |-> its 2^k-bit truth table.
// n = 10*s*ceil_log2(s), m = 2^k; requires n < m.
GeneratorPtr make_tru(int s, int k);

// Base function of a gadget generator: f : {0,1}^l x {0,1}^k -> {0,1}^{k+1},
// with a circuit emitter so gadget generators can be compiled.
class GadgetFun {
  public:
    virtual ~GadgetFun() = default;
    virtual std::string name() const = 0;
    virtual int l() const = 0;
    virtual int k() const = 0;
    virtual EvalResult apply(const BitString &v, const BitString &u) const = 0;
    virtual std::vector<int> emit(CircuitBuilder &bld, const std::vector<int> &v_nodes,
                                  const std::vector<int> &u_nodes) const = 0;
};

using GadgetFunPtr = std::shared_ptr<const GadgetFun>;

struct GadgetParams {
    int l = 0; // gadget description length
    int k = 0; // gadget input count
    int t = 0; // number of u-blocks
    GadgetFunPtr f;

    int n() const { return l + k * t; }
    int m() const { return (k + 1) * t; }
};

// Splits x into v . u^1 ... u^t and outputs f(v,u^1) ... f(v,u^t).
BitString gad_evaluate(const GadgetParams &gp, const BitString &x);

// Gadget generator Gad_f; t defaults to l+1 (minimal stretch m = n+1).
class GadGenerator : public Generator {
  public:
    GadGenerator(std::string name, std::map<std::string, long long> params, GadgetParams gp);

    const GadgetParams &gadget_params() const { return gp_; }

    bool admits(int n) const override { return n == gp_.n(); }
    int output_len(int n) const override;
    int default_n() const override { return gp_.n(); }
    EvalResult evaluate(const BitString &x) const override;
    Circuit synthesize_circuit(int n) const override;

  private:
    GadgetParams gp_;
};

// f(v,u) = u . (parity(v) xor parity(u)) -- the desk-scale test gadget.
GadgetFunPtr make_toy_fun(int l, int k);

// f = CV_{s,k}: v decodes to a circuit with gate budget s, k inputs, k+1 outputs.
GadgetFunPtr make_cv_fun(int s, int k);

// Gad_f with f = CV_{k^2,k}, l = 10*k^2*ceil_log2(k^2), t = l+1.
std::shared_ptr<const GadGenerator> make_gad_sq(int k);

// As make_gad_sq but with t u-blocks; requires t > l.
std::shared_ptr<const GadGenerator> make_gad_sq_c(int k, int t);

// Gad_f with the toy base function; t defaults to l+1.
std::shared_ptr<const GadGenerator> make_toy_gad(int l, int k, int t = -1);

// ---- nw gadgets ------------------------------------------------------------

// k+1 index sets of size c over {0..k-1} plus the 2^c-bit truth table of h.
// Binary encoding: c*(k+1)*ceil_log2(k) index bits then 2^c table bits;
// decoding is total (indices reduced mod k, duplicates permitted).
struct NwGadget {
    int k = 0;
    int c = 0;
    std::vector<std::vector<int>> sets; // k+1 sets, c indices each
    BitString h_table;                  // 2^c bits

    static int encoded_len(int k, int c);
    BitString encode() const;
    static NwGadget decode(const BitString &v, int k, int c);
    static NwGadget sample(int k, int c, uint64_t seed);

    void validate() const;
};

// Output bit i is h applied to u restricted to set J_{i+1}.
BitString nw_eval(const NwGadget &g, const BitString &u);

// nw as a pluggable gadget-generator base function: the gadget is decoded
// from the v block.
GadgetFunPtr make_nw_fun(int k, int c);

// Generator for one fixed gadget: t blocks of u, n = k*t, m = (k+1)*t.
GeneratorPtr make_nw_fixed(const NwGadget &g, int t = 1);

// ---- CLI spec strings -------------------------------------------------------
// tru:s=<s>,k=<k> | gadsq:k=<k> | gadsqc:k=<k>,t=<t>
// | nw:k=<k>,c=<c>,gadget=<hexfile>[,seed=<seed>][,t=<t>]
// | parity:n=<n> | toygad:l=<l>,k=<k>[,t=<t>]
GeneratorPtr parse_generator_spec(const std::string &spec);

} // namespace pcgen
