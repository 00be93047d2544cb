#include "fexpand/expr.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fex {

namespace {

Expr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

int cmp_rat(const Rational& a, const Rational& b) { return a < b ? -1 : (b < a ? 1 : 0); }

} // namespace

int compare(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
    case ExprKind::Const:
        return cmp_rat(a->value, b->value);
    case ExprKind::SymRef:
        return a->sym.id < b->sym.id ? -1 : (a->sym.id > b->sym.id ? 1 : 0);
    case ExprKind::Sum:
    case ExprKind::Prod: {
        if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
        for (std::size_t i = 0; i < a->kids.size(); ++i)
            if (int c = compare(a->kids[i], b->kids[i])) return c;
        return 0;
    }
    case ExprKind::Pow: {
        if (int c = compare(a->kids[0], b->kids[0])) return c;
        return a->exponent < b->exponent ? -1 : (a->exponent > b->exponent ? 1 : 0);
    }
    case ExprKind::KernelApp: {
        if (a->sym != b->sym) return a->sym.id < b->sym.id ? -1 : 1;
        return compare(a->kids[0], b->kids[0]);
    }
    case ExprKind::DMarker: {
        if (a->sym != b->sym) return a->sym.id < b->sym.id ? -1 : 1;
        if (a->order != b->order) return a->order < b->order ? -1 : 1;
        bool aa = !a->kids.empty(), ba = !b->kids.empty();
        if (aa != ba) return aa < ba ? -1 : 1;
        return aa ? compare(a->kids[0], b->kids[0]) : 0;
    }
    case ExprKind::DerivAtom: {
        if (a->sym != b->sym) return a->sym.id < b->sym.id ? -1 : 1;
        if (a->orders != b->orders) return a->orders < b->orders ? -1 : 1;
        return 0;
    }
    }
    return 0;
}

bool equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

bool is_zero(const Expr& e) { return e->kind == ExprKind::Const && e->value == 0; }
bool is_const(const Expr& e) { return e->kind == ExprKind::Const; }

Expr make_const(Rational c) {
    ExprNode n;
    n.kind = ExprKind::Const;
    n.value = std::move(c);
    return node(std::move(n));
}

Expr make_int(long v) { return make_const(Rational(v)); }

Expr make_sym(Sym s) {
    ExprNode n;
    n.kind = ExprKind::SymRef;
    n.sym = s;
    return node(std::move(n));
}

Expr make_sum(std::vector<Expr> parts) {
    std::vector<Expr> flat;
    Rational c(0);
    for (auto& p : parts) {
        if (!p) throw std::invalid_argument("null expr");
        if (p->kind == ExprKind::Sum) {
            for (auto& k : p->kids)
                if (k->kind == ExprKind::Const)
                    c += k->value;
                else
                    flat.push_back(k);
        } else if (p->kind == ExprKind::Const) {
            c += p->value;
        } else {
            flat.push_back(p);
        }
    }
    if (c != 0) flat.push_back(make_const(c));
    std::stable_sort(flat.begin(), flat.end(),
                     [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    if (flat.empty()) return make_const(Rational(0));
    if (flat.size() == 1) return flat[0];
    ExprNode n;
    n.kind = ExprKind::Sum;
    n.kids = std::move(flat);
    return node(std::move(n));
}

Expr make_prod(std::vector<Expr> parts) {
    std::vector<Expr> flat;
    Rational c(1);
    for (auto& p : parts) {
        if (!p) throw std::invalid_argument("null expr");
        if (p->kind == ExprKind::Prod) {
            for (auto& k : p->kids)
                if (k->kind == ExprKind::Const)
                    c *= k->value;
                else
                    flat.push_back(k);
        } else if (p->kind == ExprKind::Const) {
            c *= p->value;
        } else {
            flat.push_back(p);
        }
    }
    if (c == 0) return make_const(Rational(0));
    std::stable_sort(flat.begin(), flat.end(),
                     [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    if (c != 1) flat.insert(flat.begin(), make_const(c));
    if (flat.empty()) return make_const(Rational(1));
    if (flat.size() == 1) return flat[0];
    ExprNode n;
    n.kind = ExprKind::Prod;
    n.kids = std::move(flat);
    return node(std::move(n));
}

Expr make_pow(Expr base, int exponent) {
    if (!base) throw std::invalid_argument("null expr");
    if (exponent == 0) return make_const(Rational(1));
    if (exponent == 1) return base;
    if (base->kind == ExprKind::Const) {
        if (base->value == 0 && exponent < 0) throw std::domain_error("0 to negative power");
        Rational r(1);
        Rational b = exponent > 0 ? base->value : Rational(1 / base->value);
        for (int i = 0; i < std::abs(exponent); ++i) r *= b;
        return make_const(r);
    }
    if (base->kind == ExprKind::Pow)
        return make_pow(base->kids[0], base->exponent * exponent);
    ExprNode n;
    n.kind = ExprKind::Pow;
    n.kids = {std::move(base)};
    n.exponent = exponent;
    return node(std::move(n));
}

Expr make_kernel_app(Sym kernel, Expr arg) {
    ExprNode n;
    n.kind = ExprKind::KernelApp;
    n.sym = kernel;
    n.kids = {std::move(arg)};
    return node(std::move(n));
}

Expr make_dmarker(Sym kernel, int order, Expr arg) {
    if (order < 1) throw std::invalid_argument("marker order must be >= 1");
    ExprNode n;
    n.kind = ExprKind::DMarker;
    n.sym = kernel;
    n.order = order;
    if (arg) n.kids = {std::move(arg)};
    return node(std::move(n));
}

Expr make_deriv_atom(Sym dependent, std::map<Sym, unsigned> orders) {
    for (auto it = orders.begin(); it != orders.end();)
        it = (it->second == 0) ? orders.erase(it) : std::next(it);
    if (orders.empty()) return make_sym(dependent);
    ExprNode n;
    n.kind = ExprKind::DerivAtom;
    n.sym = dependent;
    n.orders = std::move(orders);
    return node(std::move(n));
}

Expr differentiate(const Expr& e, Sym s) {
    switch (e->kind) {
    case ExprKind::Const:
        return make_const(Rational(0));
    case ExprKind::SymRef:
        if (e->sym == s) return make_const(Rational(1));
        if (e->sym.kind() == SymKind::Kernel &&
            (s.kind() == SymKind::IndependentVar))
            return make_dmarker(e->sym, 1);
        return make_const(Rational(0));
    case ExprKind::Sum: {
        std::vector<Expr> parts;
        for (auto& k : e->kids) parts.push_back(differentiate(k, s));
        return make_sum(std::move(parts));
    }
    case ExprKind::Prod: {
        std::vector<Expr> parts;
        for (std::size_t i = 0; i < e->kids.size(); ++i) {
            std::vector<Expr> f = e->kids;
            f[i] = differentiate(e->kids[i], s);
            parts.push_back(make_prod(std::move(f)));
        }
        return make_sum(std::move(parts));
    }
    case ExprKind::Pow:
        return make_prod({make_int(e->exponent), make_pow(e->kids[0], e->exponent - 1),
                          differentiate(e->kids[0], s)});
    case ExprKind::KernelApp:
        return make_prod({make_dmarker(e->sym, 1, e->kids[0]), differentiate(e->kids[0], s)});
    case ExprKind::DMarker:
        if (e->kids.empty()) {
            if (s.kind() == SymKind::IndependentVar)
                return make_dmarker(e->sym, e->order + 1);
            return make_const(Rational(0));
        }
        return make_prod({make_dmarker(e->sym, e->order + 1, e->kids[0]),
                          differentiate(e->kids[0], s)});
    case ExprKind::DerivAtom: {
        auto orders = e->orders;
        orders[s] += 1;
        return make_deriv_atom(e->sym, std::move(orders));
    }
    }
    return make_const(Rational(0));
}

Expr substitute(const Expr& e, const std::map<Sym, Expr>& map) {
    switch (e->kind) {
    case ExprKind::Const:
        return e;
    case ExprKind::SymRef: {
        auto it = map.find(e->sym);
        return it == map.end() ? e : it->second;
    }
    case ExprKind::Sum:
    case ExprKind::Prod: {
        std::vector<Expr> kids;
        for (auto& k : e->kids) kids.push_back(substitute(k, map));
        return e->kind == ExprKind::Sum ? make_sum(std::move(kids)) : make_prod(std::move(kids));
    }
    case ExprKind::Pow:
        return make_pow(substitute(e->kids[0], map), e->exponent);
    case ExprKind::KernelApp:
        return make_kernel_app(e->sym, substitute(e->kids[0], map));
    case ExprKind::DMarker:
        if (e->kids.empty()) return e;
        return make_dmarker(e->sym, e->order, substitute(e->kids[0], map));
    case ExprKind::DerivAtom:
        return e;
    }
    return e;
}

namespace {

void print(std::ostream& os, const Expr& e, int parent_prec);

void print_factor(std::ostream& os, const Expr& e) { print(os, e, 2); }

void print(std::ostream& os, const Expr& e, int parent_prec) {
    switch (e->kind) {
    case ExprKind::Const: {
        bool paren = (parent_prec >= 2 && (e->value < 0 || den(e->value) != 1));
        if (paren) os << "(";
        os << to_string(e->value);
        if (paren) os << ")";
        break;
    }
    case ExprKind::SymRef:
        os << e->sym.name();
        break;
    case ExprKind::Sum: {
        if (parent_prec >= 2) os << "(";
        bool first = true;
        for (auto& k : e->kids) {
            Expr term = k;
            bool neg = false;
            if (k->kind == ExprKind::Const && k->value < 0) {
                neg = true;
                term = make_const(-k->value);
            } else if (k->kind == ExprKind::Prod && k->kids[0]->kind == ExprKind::Const &&
                       k->kids[0]->value < 0) {
                neg = true;
                auto kids = k->kids;
                kids[0] = make_const(-kids[0]->value);
                term = make_prod(std::move(kids));
            }
            if (first)
                os << (neg ? "-" : "");
            else
                os << (neg ? " - " : " + ");
            print(os, term, 1);
            first = false;
        }
        if (parent_prec >= 2) os << ")";
        break;
    }
    case ExprKind::Prod: {
        if (parent_prec >= 3) os << "(";
        bool first = true;
        for (auto& k : e->kids) {
            if (!first) os << "*";
            print(os, k, 2);
            first = false;
        }
        if (parent_prec >= 3) os << ")";
        break;
    }
    case ExprKind::Pow:
        print(os, e->kids[0], 3);
        os << "^";
        if (e->exponent < 0)
            os << "(" << e->exponent << ")";
        else
            os << e->exponent;
        break;
    case ExprKind::KernelApp:
        os << e->sym.name() << "(";
        print(os, e->kids[0], 0);
        os << ")";
        break;
    case ExprKind::DMarker:
        os << "D" << e->order << "(" << e->sym.name();
        if (!e->kids.empty()) {
            os << "; ";
            print(os, e->kids[0], 0);
        }
        os << ")";
        break;
    case ExprKind::DerivAtom: {
        os << e->sym.name() << "_";
        for (auto& [v, k] : e->orders)
            for (unsigned i = 0; i < k; ++i) os << v.name();
        break;
    }
    }
}

} // namespace

Expr poly_expr(const ParamPoly& p) {
    std::vector<Expr> terms;
    for (auto& [m, c] : p.terms()) {
        std::vector<Expr> fs{make_const(c)};
        for (auto& [s, e] : m) fs.push_back(make_pow(make_sym(s), static_cast<int>(e)));
        terms.push_back(make_prod(std::move(fs)));
    }
    return make_sum(std::move(terms));
}

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

} // namespace fex
