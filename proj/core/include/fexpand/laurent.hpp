#pragma once

#include "fexpand/expr.hpp"
#include "fexpand/parampoly.hpp"

#include <map>
#include <vector>

namespace fex {

// One Laurent monomial in the kernel symbols: integer exponents (negative
// allowed) plus a subset of first-derivative markers (bit i = marker of
// kernel i, power at most one).
struct LKey {
    std::vector<int> exps;
    unsigned markers = 0;

    auto operator<=>(const LKey&) const = default;
};

class AuxSystem; // auxreg

// Laurent polynomial in kernel symbols with ParamPoly coefficients.
// Marker powers above one must be reduced through an auxiliary system
// before they can be represented (see auxreg).
class LaurentForm {
public:
    using TermMap = std::map<LKey, ParamPoly>;

    LaurentForm() = default;
    explicit LaurentForm(std::vector<Sym> kernels) : kernels_(std::move(kernels)) {}

    static LaurentForm constant(std::vector<Sym> kernels, ParamPoly c);
    // Single kernel power: kernels[i]^e.
    static LaurentForm kernel_power(std::vector<Sym> kernels, std::size_t i, int e);
    static LaurentForm marker(std::vector<Sym> kernels, std::size_t i);

    const std::vector<Sym>& kernels() const { return kernels_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(LKey k, ParamPoly c);

    LaurentForm operator-() const;
    LaurentForm operator+(const LaurentForm& o) const;
    LaurentForm operator-(const LaurentForm& o) const;
    LaurentForm& operator+=(const LaurentForm& o);
    // Plain product; throws if marker sets collide (use mul_aux for that).
    LaurentForm operator*(const LaurentForm& o) const;
    LaurentForm operator*(const ParamPoly& c) const;
    LaurentForm operator*(const Rational& c) const { return *this * ParamPoly(c); }
    // Integer power; negative exponents need a single marker-free term whose
    // coefficient is a rational constant.
    LaurentForm pow(int e) const;

    bool operator==(const LaurentForm& o) const {
        return kernels_ == o.kernels_ && terms_ == o.terms_;
    }

    // Per-kernel [min, max] exponents over all terms. Empty form -> {0, 0}.
    std::pair<std::vector<int>, std::vector<int>> exponent_range() const;

    Expr to_expr() const;
    std::string str() const;

private:
    std::vector<Sym> kernels_;
    TermMap terms_;
};

// Converts an expression over kernel symbols, first-order markers and
// parameter symbols. Throws std::invalid_argument on unreduced D^k (k >= 2)
// markers, naming the marker.
LaurentForm to_laurent(const Expr& e, std::vector<Sym> kernels);

} // namespace fex
