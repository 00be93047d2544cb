#include "fexpand/laurent.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fex {

LaurentForm LaurentForm::constant(std::vector<Sym> kernels, ParamPoly c) {
    LaurentForm f(std::move(kernels));
    f.add_term(LKey{std::vector<int>(f.kernels_.size(), 0), 0}, std::move(c));
    return f;
}

LaurentForm LaurentForm::kernel_power(std::vector<Sym> kernels, std::size_t i, int e) {
    LaurentForm f(std::move(kernels));
    LKey k{std::vector<int>(f.kernels_.size(), 0), 0};
    k.exps.at(i) = e;
    f.add_term(std::move(k), ParamPoly(Rational(1)));
    return f;
}

LaurentForm LaurentForm::marker(std::vector<Sym> kernels, std::size_t i) {
    LaurentForm f(std::move(kernels));
    if (i >= f.kernels_.size()) throw std::out_of_range("marker index");
    f.add_term(LKey{std::vector<int>(f.kernels_.size(), 0), 1u << i},
               ParamPoly(Rational(1)));
    return f;
}

void LaurentForm::add_term(LKey k, ParamPoly c) {
    if (k.exps.size() != kernels_.size()) throw std::invalid_argument("LKey arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(std::move(k), std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LaurentForm LaurentForm::operator-() const {
    LaurentForm r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

LaurentForm& LaurentForm::operator+=(const LaurentForm& o) {
    if (kernels_ != o.kernels_) {
        if (terms_.empty() && kernels_.empty()) {
            *this = o;
            return *this;
        }
        if (o.terms_.empty()) return *this;
        throw std::invalid_argument("LaurentForm kernel basis mismatch");
    }
    for (auto& [k, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

LaurentForm LaurentForm::operator+(const LaurentForm& o) const {
    LaurentForm r = *this;
    r += o;
    return r;
}

LaurentForm LaurentForm::operator-(const LaurentForm& o) const { return *this + (-o); }

LaurentForm LaurentForm::operator*(const LaurentForm& o) const {
    if (kernels_ != o.kernels_) throw std::invalid_argument("LaurentForm kernel basis mismatch");
    LaurentForm r(kernels_);
    for (auto& [ka, ca] : terms_)
        for (auto& [kb, cb] : o.terms_) {
            if (ka.markers & kb.markers)
                throw std::invalid_argument(
                    "marker square needs an auxiliary system (use mul_aux)");
            LKey k{ka.exps, ka.markers | kb.markers};
            for (std::size_t i = 0; i < k.exps.size(); ++i) k.exps[i] += kb.exps[i];
            r.add_term(std::move(k), ca * cb);
        }
    return r;
}

LaurentForm LaurentForm::operator*(const ParamPoly& c) const {
    LaurentForm r(kernels_);
    if (c.is_zero()) return r;
    for (auto& [k, v] : terms_) r.add_term(k, v * c);
    return r;
}

LaurentForm LaurentForm::pow(int e) const {
    if (e == 0) return constant(kernels_, ParamPoly(Rational(1)));
    LaurentForm base = *this;
    if (e < 0) {
        if (terms_.size() != 1) throw std::invalid_argument("inverse of a non-monomial form");
        const auto& [k, c] = *terms_.begin();
        if (k.markers) throw std::invalid_argument("inverse of a marker term");
        if (!c.is_constant())
            throw std::invalid_argument("inverse of a non-constant coefficient");
        LKey ik = k;
        for (auto& x : ik.exps) x = -x;
        base = LaurentForm(kernels_);
        base.add_term(std::move(ik), ParamPoly(Rational(1) / c.constant_value()));
        e = -e;
    }
    LaurentForm r = constant(kernels_, ParamPoly(Rational(1)));
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

std::pair<std::vector<int>, std::vector<int>> LaurentForm::exponent_range() const {
    std::vector<int> lo(kernels_.size(), 0), hi(kernels_.size(), 0);
    bool first = true;
    for (auto& [k, c] : terms_) {
        for (std::size_t i = 0; i < kernels_.size(); ++i) {
            lo[i] = first ? k.exps[i] : std::min(lo[i], k.exps[i]);
            hi[i] = first ? k.exps[i] : std::max(hi[i], k.exps[i]);
        }
        first = false;
    }
    return {lo, hi};
}

Expr LaurentForm::to_expr() const {
    std::vector<Expr> terms;
    for (auto& [k, c] : terms_) {
        std::vector<Expr> fs{poly_expr(c)};
        for (std::size_t i = 0; i < kernels_.size(); ++i)
            if (k.exps[i] != 0) fs.push_back(make_pow(make_sym(kernels_[i]), k.exps[i]));
        for (std::size_t i = 0; i < kernels_.size(); ++i)
            if (k.markers & (1u << i)) fs.push_back(make_dmarker(kernels_[i], 1));
        terms.push_back(make_prod(std::move(fs)));
    }
    return make_sum(std::move(terms));
}

std::string LaurentForm::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (std::size_t i = 0; i < kernels_.size(); ++i) {
            if (k.exps[i] != 0) {
                os << "*" << kernels_[i].name();
                if (k.exps[i] != 1) os << "^" << k.exps[i];
            }
            if (k.markers & (1u << i)) os << "*D1(" << kernels_[i].name() << ")";
        }
    }
    return os.str();
}

namespace {

LaurentForm convert(const Expr& e, const std::vector<Sym>& kernels) {
    switch (e->kind) {
    case ExprKind::Const:
        return LaurentForm::constant(kernels, ParamPoly(e->value));
    case ExprKind::SymRef: {
        auto it = std::find(kernels.begin(), kernels.end(), e->sym);
        if (it != kernels.end())
            return LaurentForm::kernel_power(kernels,
                                             static_cast<std::size_t>(it - kernels.begin()), 1);
        if (e->sym.kind() == SymKind::Kernel)
            throw std::invalid_argument("kernel symbol " + e->sym.name() +
                                        " outside the declared basis");
        return LaurentForm::constant(kernels, ParamPoly(e->sym));
    }
    case ExprKind::Sum: {
        LaurentForm r(kernels);
        for (auto& k : e->kids) r += convert(k, kernels);
        return r;
    }
    case ExprKind::Prod: {
        LaurentForm r = LaurentForm::constant(kernels, ParamPoly(Rational(1)));
        for (auto& k : e->kids) r = r * convert(k, kernels);
        return r;
    }
    case ExprKind::Pow:
        return convert(e->kids[0], kernels).pow(e->exponent);
    case ExprKind::DMarker: {
        if (e->order >= 2)
            throw std::invalid_argument("unreduced derivative marker D" +
                                        std::to_string(e->order) + "(" + e->sym.name() + ")");
        auto it = std::find(kernels.begin(), kernels.end(), e->sym);
        if (it == kernels.end())
            throw std::invalid_argument("marker for kernel " + e->sym.name() +
                                        " outside the declared basis");
        return LaurentForm::marker(kernels, static_cast<std::size_t>(it - kernels.begin()));
    }
    default:
        throw std::invalid_argument("expression is not a kernel Laurent polynomial: " +
                                    to_string(e));
    }
}

} // namespace

LaurentForm to_laurent(const Expr& e, std::vector<Sym> kernels) {
    return convert(e, kernels);
}

} // namespace fex
