#pragma once

#include "fexpand/auxreg.hpp"
#include "fexpand/reduce.hpp"

#include <map>
#include <vector>

namespace fex {

// Expansion orders per coefficient block. Blocks are indexed by the marker
// subset carried by the block (bit i set = factor D1(kernel_i)); orders[mask]
// holds one order per kernel. Arity 1 has blocks {0,1}, arity 2 {0..3},
// arity 3 {0..7}.
struct AnsatzShape {
    unsigned arity = 1;
    std::map<unsigned, std::vector<unsigned>> orders;

    static AnsatzShape uniform(unsigned arity, unsigned order);
};

struct AnsatzInstance {
    AnsatzShape shape;
    // coeffs[mask][kernel-exponent-vector] = coefficient symbol
    std::map<unsigned, std::map<std::vector<int>, Sym>> coeffs;
    std::vector<Sym> coeff_syms; // deterministic enumeration order
    Expr body;
};

// Block name prefixes a, b, c, d, ... in mask order.
std::string block_prefix(unsigned arity, unsigned mask);

// v = sum over blocks of sum_{|e_i| <= order_i} coeff * prod kernel_i^{e_i}
// * prod markers(mask).
AnsatzInstance build(const AnsatzShape& shape, const AuxSystem& aux);

// Evaluates an ODE expression where deriv_forms[k] is the Laurent form of
// d^k v / dxi^k.
LaurentForm eval_ode_expr(const Expr& e, Sym dependent,
                          const std::vector<LaurentForm>& deriv_forms,
                          const AuxSystem& aux);

// Successive aux-derivatives of the ansatz body, orders 0..max_order.
std::vector<LaurentForm> body_derivatives(const AnsatzInstance& a, const AuxSystem& aux,
                                          unsigned max_order);

// Exact per-block Laurent exponent ranges of one substituted ODE monomial,
// computed by full generic expansion: range[mask] = (lo, hi) per kernel.
struct DegreeRecord {
    std::map<unsigned, std::pair<std::vector<int>, std::vector<int>>> range;

    int top(std::size_t kernel) const; // max over blocks of hi[kernel]
};

DegreeRecord formal_degree(const Expr& mono, Sym dependent, const AnsatzShape& shape,
                           const AuxSystem& aux);

struct NoBalanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expansion order from the classical balance of the two designated monomials:
// d * vdeg(M1) + w * weight(M1) = d * vdeg(M2) + w * weight(M2), where the
// derivative growth w is max rule degree minus one, or 2 for the
// degree-preserving rule systems. All blocks receive the same order.
AnsatzShape balance(const OdeSpec& o, const AuxSystem& aux, unsigned arity,
                    unsigned max_order);

// Derivative growth per xi-derivative for this rule system.
unsigned derivative_growth(const AuxSystem& aux);

} // namespace fex
