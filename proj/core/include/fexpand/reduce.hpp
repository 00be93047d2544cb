#pragma once

#include "fexpand/parampoly.hpp"
#include "fexpand/pdeparse.hpp"

#include <map>
#include <vector>

namespace fex {

// Travelling-wave substitution u(x1..xn) = v(xi), xi = sum alpha_i x_i.
struct WaveSub {
    std::vector<Sym> wave_params; // one per independent variable, same order
    Sym wave_var{};
};

// Conventional substitution for p: params alpha, beta, ... in the order of
// p.independents; wave variable y.
WaveSub standard_wave(const PdeSpec& p);

struct OdeSpec {
    Sym dependent{}; // v
    Sym variable{};  // wave variable
    Expr lhs;
    std::set<Sym> params;
};

// ODE polynomial collected by derivative exponents: key[k] is the power of
// d^k v / dxi^k (key[0] the power of v); values are parameter polynomials.
class OdePoly {
public:
    using Key = std::vector<unsigned>;
    using TermMap = std::map<Key, ParamPoly>;

    static OdePoly from_expr(const Expr& e, Sym dependent, Sym variable);

    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    unsigned max_order() const;

    void add_term(Key k, ParamPoly c);
    OdePoly operator+(const OdePoly& o) const;
    OdePoly operator*(const OdePoly& o) const;

    Expr to_expr(Sym dependent, Sym variable) const;

private:
    TermMap terms_;
};

// One collected ODE monomial c * prod_k (v^(k))^{key[k]}.
struct OdeMonomial {
    OdePoly::Key key;
    ParamPoly coeff;

    unsigned v_degree() const;     // total degree in v and its derivatives
    unsigned deriv_weight() const; // total number of xi-derivatives
    unsigned max_order() const;    // highest derivative order present
    Expr to_expr(Sym dependent, Sym variable) const;
};

struct SolvableByQuadrature : std::runtime_error {
    SolvableByQuadrature() : std::runtime_error(
        "single-monomial equation, solvable by successive integrations") {}
};

// Each derivative atom (k1..kn) maps to prod alpha_i^{k_i} * v^(sum k_i);
// the result is expanded and collected.
OdeSpec reduce_pde(const PdeSpec& p, const WaveSub& w);

// Collected monomials ordered so that the first carries the highest-order
// derivative and the second is the designated (nonlinear if possible)
// balance partner. Throws SolvableByQuadrature for single-monomial input.
std::vector<OdeMonomial> ode_monomials(const OdeSpec& o);

std::vector<Expr> monomial_split(const OdeSpec& o);

} // namespace fex
