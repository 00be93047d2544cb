#include "fexpand/reduce.hpp"

#include <algorithm>
#include <stdexcept>

namespace fex {

WaveSub standard_wave(const PdeSpec& p) {
    static const char* names[] = {"alpha", "beta", "gamma", "delta"};
    WaveSub w;
    for (std::size_t i = 0; i < p.independents.size(); ++i) {
        std::string n = i < 4 ? names[i] : "alpha" + std::to_string(i + 1);
        w.wave_params.push_back(symtab::intern(n, SymKind::WaveParam));
    }
    w.wave_var = symtab::intern("y", SymKind::IndependentVar);
    return w;
}

void OdePoly::add_term(Key k, ParamPoly c) {
    while (!k.empty() && k.back() == 0) k.pop_back();
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(std::move(k), std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

unsigned OdePoly::max_order() const {
    unsigned m = 0;
    for (auto& [k, c] : terms_)
        if (!k.empty()) m = std::max(m, static_cast<unsigned>(k.size() - 1));
    return m;
}

OdePoly OdePoly::operator+(const OdePoly& o) const {
    OdePoly r = *this;
    for (auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

OdePoly OdePoly::operator*(const OdePoly& o) const {
    OdePoly r;
    for (auto& [ka, ca] : terms_)
        for (auto& [kb, cb] : o.terms_) {
            Key k(std::max(ka.size(), kb.size()), 0);
            for (std::size_t i = 0; i < ka.size(); ++i) k[i] += ka[i];
            for (std::size_t i = 0; i < kb.size(); ++i) k[i] += kb[i];
            r.add_term(std::move(k), ca * cb);
        }
    return r;
}

OdePoly OdePoly::from_expr(const Expr& e, Sym dependent, Sym variable) {
    switch (e->kind) {
    case ExprKind::Const: {
        OdePoly r;
        r.add_term({}, ParamPoly(e->value));
        return r;
    }
    case ExprKind::SymRef: {
        OdePoly r;
        if (e->sym == dependent)
            r.add_term({1}, ParamPoly(Rational(1)));
        else
            r.add_term({}, ParamPoly(e->sym));
        return r;
    }
    case ExprKind::DerivAtom: {
        if (e->sym != dependent)
            throw std::invalid_argument("derivative of unexpected symbol " + e->sym.name());
        unsigned total = 0;
        for (auto& [v, k] : e->orders) {
            if (v != variable)
                throw std::invalid_argument("derivative in unexpected variable " + v.name());
            total += k;
        }
        OdePoly r;
        Key k(total + 1, 0);
        k[total] = 1;
        r.add_term(std::move(k), ParamPoly(Rational(1)));
        return r;
    }
    case ExprKind::Sum: {
        OdePoly r;
        for (auto& kid : e->kids) r = r + from_expr(kid, dependent, variable);
        return r;
    }
    case ExprKind::Prod: {
        OdePoly r;
        r.add_term({}, ParamPoly(Rational(1)));
        for (auto& kid : e->kids) r = r * from_expr(kid, dependent, variable);
        return r;
    }
    case ExprKind::Pow: {
        if (e->exponent < 0)
            throw std::invalid_argument("negative power in an ODE polynomial");
        OdePoly base = from_expr(e->kids[0], dependent, variable);
        OdePoly r;
        r.add_term({}, ParamPoly(Rational(1)));
        for (int i = 0; i < e->exponent; ++i) r = r * base;
        return r;
    }
    default:
        throw std::invalid_argument("not an ODE polynomial: " + to_string(e));
    }
}

namespace {

Expr key_to_expr(const OdePoly::Key& key, Sym dependent, Sym variable) {
    std::vector<Expr> fs;
    for (std::size_t k = 0; k < key.size(); ++k) {
        if (key[k] == 0) continue;
        Expr atom = k == 0 ? make_sym(dependent)
                           : make_deriv_atom(dependent, {{variable, static_cast<unsigned>(k)}});
        fs.push_back(make_pow(atom, static_cast<int>(key[k])));
    }
    return make_prod(std::move(fs));
}

} // namespace

Expr OdePoly::to_expr(Sym dependent, Sym variable) const {
    std::vector<Expr> terms;
    for (auto& [k, c] : terms_)
        terms.push_back(make_prod({poly_expr(c), key_to_expr(k, dependent, variable)}));
    return make_sum(std::move(terms));
}

unsigned OdeMonomial::v_degree() const {
    unsigned d = 0;
    for (unsigned e : key) d += e;
    return d;
}

unsigned OdeMonomial::deriv_weight() const {
    unsigned w = 0;
    for (std::size_t k = 0; k < key.size(); ++k) w += static_cast<unsigned>(k) * key[k];
    return w;
}

unsigned OdeMonomial::max_order() const {
    for (std::size_t k = key.size(); k-- > 0;)
        if (key[k]) return static_cast<unsigned>(k);
    return 0;
}

Expr OdeMonomial::to_expr(Sym dependent, Sym variable) const {
    return make_prod({poly_expr(coeff), key_to_expr(key, dependent, variable)});
}

namespace {

Expr transform(const Expr& e, const PdeSpec& p, const WaveSub& w, Sym v) {
    switch (e->kind) {
    case ExprKind::Const:
        return e;
    case ExprKind::SymRef:
        return e->sym == p.dependent ? make_sym(v) : e;
    case ExprKind::DerivAtom: {
        unsigned total = 0;
        std::vector<Expr> fs;
        for (auto& [var, k] : e->orders) {
            auto it = std::find(p.independents.begin(), p.independents.end(), var);
            if (it == p.independents.end())
                throw std::invalid_argument("derivative in unknown variable " + var.name());
            std::size_t i = static_cast<std::size_t>(it - p.independents.begin());
            fs.push_back(make_pow(make_sym(w.wave_params[i]), static_cast<int>(k)));
            total += k;
        }
        fs.push_back(make_deriv_atom(v, {{w.wave_var, total}}));
        return make_prod(std::move(fs));
    }
    case ExprKind::Sum:
    case ExprKind::Prod: {
        std::vector<Expr> kids;
        for (auto& k : e->kids) kids.push_back(transform(k, p, w, v));
        return e->kind == ExprKind::Sum ? make_sum(std::move(kids)) : make_prod(std::move(kids));
    }
    case ExprKind::Pow:
        return make_pow(transform(e->kids[0], p, w, v), e->exponent);
    default:
        throw std::invalid_argument("unexpected node in a PDE: " + to_string(e));
    }
}

} // namespace

OdeSpec reduce_pde(const PdeSpec& p, const WaveSub& w) {
    if (w.wave_params.size() != p.independents.size())
        throw std::invalid_argument("one wave parameter per independent variable required");
    OdeSpec o;
    o.dependent = symtab::intern("v", SymKind::DependentVar);
    o.variable = w.wave_var;
    o.params = p.params;
    for (Sym s : w.wave_params) o.params.insert(s);
    Expr raw = transform(p.lhs, p, w, o.dependent);
    o.lhs = OdePoly::from_expr(raw, o.dependent, o.variable).to_expr(o.dependent, o.variable);
    return o;
}

std::vector<OdeMonomial> ode_monomials(const OdeSpec& o) {
    OdePoly poly = OdePoly::from_expr(o.lhs, o.dependent, o.variable);
    std::vector<OdeMonomial> ms;
    for (auto& [k, c] : poly.terms()) ms.push_back({k, c});
    if (ms.size() < 2) throw SolvableByQuadrature();

    auto rank = [](const OdeMonomial& m) {
        return std::make_tuple(m.max_order(), m.deriv_weight(), m.v_degree(), m.key);
    };
    auto m1 = std::max_element(ms.begin(), ms.end(), [&](const auto& a, const auto& b) {
        return rank(a) < rank(b);
    });
    std::iter_swap(ms.begin(), m1);

    auto nl_rank = [](const OdeMonomial& m) {
        return std::make_tuple(m.v_degree() >= 2 ? 1 : 0, m.v_degree(), m.deriv_weight(),
                               m.key);
    };
    auto m2 = std::max_element(ms.begin() + 1, ms.end(), [&](const auto& a, const auto& b) {
        return nl_rank(a) < nl_rank(b);
    });
    std::iter_swap(ms.begin() + 1, m2);
    return ms;
}

std::vector<Expr> monomial_split(const OdeSpec& o) {
    std::vector<Expr> out;
    for (auto& m : ode_monomials(o)) out.push_back(m.to_expr(o.dependent, o.variable));
    return out;
}

} // namespace fex
