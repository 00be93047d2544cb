#pragma once

#include "fexpand/rational.hpp"
#include "fexpand/symbols.hpp"

#include <map>
#include <set>
#include <vector>

namespace fex {

// Monomial over parameter symbols: sorted (sym, exponent>0) pairs.
using Mono = std::vector<std::pair<Sym, unsigned>>;

unsigned total_degree(const Mono& m);

// Graded lexicographic order (by symbol creation order). Returns true if a < b.
bool mono_less(const Mono& a, const Mono& b);

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const { return mono_less(a, b); }
};

// Multivariate polynomial with exact rational coefficients over parameter
// symbols. Canonical: no zero coefficients stored; monomials graded-lex ordered.
class ParamPoly {
public:
    using TermMap = std::map<Mono, Rational, MonoLess>;

    ParamPoly() = default;
    explicit ParamPoly(Rational c);
    explicit ParamPoly(Sym s, unsigned exp = 1);
    static ParamPoly term(Mono m, Rational c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant value; polynomial must be constant.
    Rational constant_value() const;

    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    ParamPoly operator-() const;
    ParamPoly operator+(const ParamPoly& o) const;
    ParamPoly operator-(const ParamPoly& o) const;
    ParamPoly operator*(const ParamPoly& o) const;
    ParamPoly& operator+=(const ParamPoly& o);
    ParamPoly& operator-=(const ParamPoly& o);
    ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }
    ParamPoly operator*(const Rational& c) const;
    ParamPoly pow(unsigned e) const;

    bool operator==(const ParamPoly& o) const { return terms_ == o.terms_; }

    // Largest monomial (graded lex). Polynomial must be nonzero.
    const Mono& leading_mono() const;
    const Rational& leading_coeff() const;

    unsigned degree(Sym s) const;
    unsigned total_deg() const;
    bool depends_on(Sym s) const;
    std::set<Sym> symbols() const;

    // Coefficients of powers of s: result[i] is the coefficient of s^i
    // (a polynomial free of s).
    std::vector<ParamPoly> coeffs_in(Sym s) const;

    ParamPoly derivative(Sym s) const;
    ParamPoly substitute(Sym s, const ParamPoly& value) const;

    // Replaces s^e (e >= 2) by square_value^(e/2) * s^(e%2) everywhere.
    // Used for quadratic extension symbols (eps^2 = 1, s^2 = 13).
    ParamPoly reduce_square(Sym s, const ParamPoly& square_value) const;

    // gcd of all coefficients, positive; zero poly has content 0.
    Rational content() const;
    // Divides by content and fixes the leading coefficient positive.
    ParamPoly normalized() const;

    Rational eval(const std::map<Sym, Rational>& vals) const;
    double eval_double(const std::map<Sym, double>& vals) const;

    std::string str() const;

private:
    void prune();
    TermMap terms_;
};

inline ParamPoly operator*(const Rational& c, const ParamPoly& p) { return p * c; }

// Quotient of ParamPolys, used for solver assignments. Kept content-normalized
// but not gcd-reduced; equality tests cross-multiply.
struct RatFun {
    ParamPoly num;
    ParamPoly den = ParamPoly(Rational(1));

    static RatFun from(ParamPoly p) { return {std::move(p), ParamPoly(Rational(1))}; }
    bool is_poly() const { return den.is_constant(); }
    ParamPoly as_poly() const; // requires is_poly()
    RatFun operator-() const { return {-num, den}; }
    bool same_as(const RatFun& o) const { return (num * o.den) == (o.num * den); }
    std::string str() const;
};

} // namespace fex
