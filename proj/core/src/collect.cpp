#include "fexpand/collect.hpp"

#include <algorithm>

namespace fex {

ResidualDecomposition substitute(const OdeSpec& o, const AnsatzInstance& a,
                                 const AuxSystem& aux) {
    OdePoly poly = OdePoly::from_expr(o.lhs, o.dependent, o.variable);
    auto derivs = body_derivatives(a, aux, poly.max_order());
    LaurentForm f = eval_ode_expr(o.lhs, o.dependent, derivs, aux);
    auto canon = aux.canonicalize(f);
    return {std::move(canon.form), std::move(canon.cleared)};
}

bool poly_less(const ParamPoly& a, const ParamPoly& b) {
    auto ia = a.terms().begin(), ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (mono_less(ia->first, ib->first)) return true;
        if (mono_less(ib->first, ia->first)) return false;
        if (ia->second != ib->second) return ia->second < ib->second;
        ++ia, ++ib;
    }
    return ia == a.terms().end() && ib != b.terms().end();
}

AlgSystem extract_system(const ResidualDecomposition& r, std::vector<Sym> unknowns) {
    AlgSystem s;
    s.unknowns = std::move(unknowns);
    for (auto& [key, c] : r.residual.terms()) s.equations.push_back(c.normalized());
    std::sort(s.equations.begin(), s.equations.end(), poly_less);
    s.equations.erase(std::unique(s.equations.begin(), s.equations.end()),
                      s.equations.end());
    return s;
}

} // namespace fex
