#pragma once

#include "fexpand/parampoly.hpp"
#include "fexpand/rational.hpp"
#include "fexpand/symbols.hpp"

#include <map>
#include <memory>
#include <vector>

namespace fex {

struct ExprNode;

// Immutable expression value; cheap to copy and share.
using Expr = std::shared_ptr<const ExprNode>;

enum class ExprKind : std::uint8_t {
    Const,     // rational constant
    SymRef,    // any symbol
    Sum,       // n-ary, flattened
    Prod,      // n-ary, flattened
    Pow,       // integer exponent (may be negative)
    KernelApp, // kernel(argument), e.g. tanh(phi)
    DMarker,   // D^n(kernel), formal derivative marker (optionally applied)
    DerivAtom, // derivative of a dependent variable, multi-index over vars
};

struct ExprNode {
    ExprKind kind;
    Rational value;          // Const
    Sym sym{};               // SymRef / KernelApp / DMarker / DerivAtom (dependent)
    std::vector<Expr> kids;  // Sum/Prod children; Pow base; KernelApp/DMarker arg
    int exponent = 0;        // Pow
    int order = 0;           // DMarker derivative order (>= 1)
    std::map<Sym, unsigned> orders; // DerivAtom multi-index (total order >= 1)
};

// Canonicalizing constructors: sums/products are flattened, constants merged,
// children deterministically ordered.
Expr make_const(Rational c);
Expr make_int(long n);
Expr make_sym(Sym s);
Expr make_sum(std::vector<Expr> parts);
Expr make_prod(std::vector<Expr> parts);
Expr make_pow(Expr base, int exponent);
Expr make_kernel_app(Sym kernel, Expr arg);
Expr make_dmarker(Sym kernel, int order, Expr arg = nullptr);
Expr make_deriv_atom(Sym dependent, std::map<Sym, unsigned> orders);

inline Expr operator+(const Expr& a, const Expr& b) { return make_sum({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) {
    return make_sum({a, make_prod({make_int(-1), b})});
}
inline Expr operator*(const Expr& a, const Expr& b) { return make_prod({a, b}); }

// Total order on canonical trees; 0 iff structurally equal.
int compare(const Expr& a, const Expr& b);
bool equal(const Expr& a, const Expr& b);

bool is_zero(const Expr& e);
bool is_const(const Expr& e);

// Formal derivative with respect to s. Kernel symbols and markers are treated
// as functions of the wave variable: d/dxi F -> D1(F), d/dxi D^k(F) -> D^{k+1}(F).
Expr differentiate(const Expr& e, Sym s);

// Simultaneous substitution of symbols by expressions (SymRef occurrences only).
Expr substitute(const Expr& e, const std::map<Sym, Expr>& map);

std::string to_string(const Expr& e);

// Expression form of a parameter polynomial.
Expr poly_expr(const ParamPoly& p);

} // namespace fex
