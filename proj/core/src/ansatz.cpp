#include "fexpand/ansatz.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace fex {

AnsatzShape AnsatzShape::uniform(unsigned arity, unsigned order) {
    AnsatzShape s;
    s.arity = arity;
    for (unsigned mask = 0; mask < (1u << arity); ++mask)
        s.orders[mask] = std::vector<unsigned>(arity, order);
    return s;
}

std::string block_prefix(unsigned arity, unsigned mask) {
    if (mask >= (1u << arity)) throw std::invalid_argument("block mask out of range");
    return std::string(1, static_cast<char>('a' + mask));
}

namespace {

std::string index_tag(int i) {
    return i < 0 ? "m" + std::to_string(-i) : std::to_string(i);
}

void enumerate(const std::vector<unsigned>& ord, std::vector<int>& cur, std::size_t pos,
               const std::function<void(const std::vector<int>&)>& fn) {
    if (pos == ord.size()) {
        fn(cur);
        return;
    }
    for (int e = -static_cast<int>(ord[pos]); e <= static_cast<int>(ord[pos]); ++e) {
        cur[pos] = e;
        enumerate(ord, cur, pos + 1, fn);
    }
}

} // namespace

AnsatzInstance build(const AnsatzShape& shape, const AuxSystem& aux) {
    if (shape.arity != aux.arity())
        throw std::invalid_argument("ansatz arity does not match the kernel count");
    AnsatzInstance inst;
    inst.shape = shape;
    std::vector<Expr> blocks;
    for (auto& [mask, ord] : shape.orders) {
        if (ord.size() != shape.arity)
            throw std::invalid_argument("one order per kernel required in each block");
        std::string prefix = block_prefix(shape.arity, mask);
        std::vector<int> cur(shape.arity, 0);
        enumerate(ord, cur, 0, [&](const std::vector<int>& e) {
            std::string name = prefix;
            for (int x : e) name += "_" + index_tag(x);
            // a verifier run may already have interned the name as a free
            // constant of a fixture; identity is by name, so reuse it
            auto found = symtab::find(name);
            Sym c = found ? *found : symtab::intern(name, SymKind::AnsatzCoeff);
            inst.coeffs[mask][e] = c;
            inst.coeff_syms.push_back(c);
            std::vector<Expr> fs{make_sym(c)};
            for (std::size_t i = 0; i < shape.arity; ++i)
                if (e[i] != 0) fs.push_back(make_pow(make_sym(aux.kernels()[i]), e[i]));
            for (std::size_t i = 0; i < shape.arity; ++i)
                if (mask & (1u << i)) fs.push_back(make_dmarker(aux.kernels()[i], 1));
            blocks.push_back(make_prod(std::move(fs)));
        });
    }
    inst.body = make_sum(std::move(blocks));
    return inst;
}

LaurentForm eval_ode_expr(const Expr& e, Sym dependent,
                          const std::vector<LaurentForm>& deriv_forms,
                          const AuxSystem& aux) {
    const auto& K = aux.kernels();
    switch (e->kind) {
    case ExprKind::Const:
        return LaurentForm::constant(K, ParamPoly(e->value));
    case ExprKind::SymRef:
        if (e->sym == dependent) return deriv_forms.at(0);
        return LaurentForm::constant(K, ParamPoly(e->sym));
    case ExprKind::DerivAtom: {
        if (e->sym != dependent)
            throw std::invalid_argument("unexpected derivative of " + e->sym.name());
        unsigned total = 0;
        for (auto& [v, k] : e->orders) total += k;
        return deriv_forms.at(total);
    }
    case ExprKind::Sum: {
        LaurentForm r(K);
        for (auto& k : e->kids) r += eval_ode_expr(k, dependent, deriv_forms, aux);
        return r;
    }
    case ExprKind::Prod: {
        LaurentForm r = LaurentForm::constant(K, ParamPoly(Rational(1)));
        for (auto& k : e->kids) r = aux.mul(r, eval_ode_expr(k, dependent, deriv_forms, aux));
        return r;
    }
    case ExprKind::Pow: {
        if (e->exponent < 0)
            throw std::invalid_argument("negative power in an ODE expression");
        return aux.pow(eval_ode_expr(e->kids[0], dependent, deriv_forms, aux),
                       static_cast<unsigned>(e->exponent));
    }
    default:
        throw std::invalid_argument("unexpected node in an ODE expression: " + to_string(e));
    }
}

std::vector<LaurentForm> body_derivatives(const AnsatzInstance& a, const AuxSystem& aux,
                                          unsigned max_order) {
    std::vector<LaurentForm> d;
    d.push_back(eval_aux(a.body, aux));
    for (unsigned k = 1; k <= max_order; ++k) d.push_back(aux.derivative(d.back()));
    return d;
}

int DegreeRecord::top(std::size_t kernel) const {
    bool any = false;
    int t = 0;
    for (auto& [mask, lohi] : range) {
        int h = lohi.second.at(kernel);
        t = any ? std::max(t, h) : h;
        any = true;
    }
    if (!any) throw std::logic_error("degree of an empty record");
    return t;
}

DegreeRecord formal_degree(const Expr& mono, Sym dependent, const AnsatzShape& shape,
                           const AuxSystem& aux) {
    unsigned max_order = 0;
    std::function<void(const Expr&)> scan = [&](const Expr& e) {
        if (e->kind == ExprKind::DerivAtom) {
            unsigned total = 0;
            for (auto& [v, k] : e->orders) total += k;
            max_order = std::max(max_order, total);
        }
        for (auto& k : e->kids) scan(k);
    };
    scan(mono);

    AnsatzInstance inst = build(shape, aux);
    auto derivs = body_derivatives(inst, aux, max_order);
    LaurentForm f = eval_ode_expr(mono, dependent, derivs, aux);
    auto canon = aux.canonicalize(f);

    DegreeRecord rec;
    for (auto& [key, c] : canon.form.terms()) {
        auto it = rec.range.find(key.markers);
        if (it == rec.range.end()) {
            std::vector<int> lo(key.exps.size()), hi(key.exps.size());
            for (std::size_t i = 0; i < key.exps.size(); ++i)
                lo[i] = hi[i] = key.exps[i] - static_cast<int>(canon.cleared[i]);
            rec.range.emplace(key.markers, std::make_pair(lo, hi));
        } else {
            for (std::size_t i = 0; i < key.exps.size(); ++i) {
                int e = key.exps[i] - static_cast<int>(canon.cleared[i]);
                it->second.first[i] = std::min(it->second.first[i], e);
                it->second.second[i] = std::max(it->second.second[i], e);
            }
        }
    }
    return rec;
}

unsigned derivative_growth(const AuxSystem& aux) {
    int w = 0;
    for (std::size_t i = 0; i < aux.arity(); ++i) {
        const auto& r = aux.rule(i);
        int deg = 0;
        for (auto& [k, c] : r.rhs.terms()) {
            int d = 0;
            for (int e : k.exps) d += std::max(e, 0);
            deg = std::max(deg, d);
        }
        if (r.quadratic) deg = deg / 2;
        w = std::max(w, deg - 1);
    }
    return w >= 1 ? static_cast<unsigned>(w) : 2u;
}

AnsatzShape balance(const OdeSpec& o, const AuxSystem& aux, unsigned arity,
                    unsigned max_order) {
    if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");
    auto ms = ode_monomials(o);
    const OdeMonomial& m1 = ms[0];
    const OdeMonomial& m2 = ms[1];
    long p1 = m1.v_degree(), q1 = m1.deriv_weight();
    long p2 = m2.v_degree(), q2 = m2.deriv_weight();
    long w = static_cast<long>(derivative_growth(aux));
    long dp = p1 - p2, dq = q2 - q1;
    if (dp == 0)
        throw NoBalanceError("the designated monomials have equal degree in v; "
                             "no expansion order balances them");
    long num = w * dq;
    if (num % dp != 0 || num / dp < 1)
        throw NoBalanceError("no positive integer expansion order balances the "
                             "designated monomials (try another auxiliary system)");
    long d = num / dp;
    if (d > static_cast<long>(max_order))
        throw NoBalanceError("balancing order " + std::to_string(d) +
                             " exceeds the bound " + std::to_string(max_order));
    return AnsatzShape::uniform(arity, static_cast<unsigned>(d));
}

} // namespace fex
