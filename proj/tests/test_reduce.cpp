#include "doctest.h"

#include "fexpand/reduce.hpp"

#include <string>
#include <vector>

using namespace fex;

namespace {

OdeSpec reduced(const std::string& eq, const std::vector<std::string>& params = {}) {
    PdeSpec p = parse_pde(eq, params);
    WaveSub w = standard_wave(p);
    return reduce_pde(p, w);
}

// v^{(k)} of the reduced ODE as an expression
Expr vd(const OdeSpec& o, unsigned k) {
    if (k == 0) return make_sym(o.dependent);
    return make_deriv_atom(o.dependent, {{o.variable, k}});
}

Expr wp(const char* name) { return make_sym(*symtab::find(name)); }

} // namespace

TEST_CASE("travelling-wave reduction regression fixtures") {
    // v(y), y = alpha*t + beta*x; each reference checked by hand against the
    // chain rule u_{t^j x^k} -> alpha^j beta^k v^{(j+k)}.
    {
        OdeSpec o = reduced("u_xx + u*u_x - u_t + u - u^2 = 0");
        Expr a = wp("alpha"), b = wp("beta");
        Expr want = make_pow(b, 2) * vd(o, 2) + b * vd(o, 0) * vd(o, 1) -
                    a * vd(o, 1) + vd(o, 0) - make_pow(vd(o, 0), 2);
        CHECK(equal(o.lhs, want));
    }
    {
        OdeSpec o = reduced("u_t + sigma*u^2*u_x + delta*u_x*u_xx + rho*u*u_xxx + u_xxxxx = 0",
                            {"sigma", "delta", "rho"});
        Expr a = wp("alpha"), b = wp("beta");
        Expr sg = wp("sigma"), dl = wp("delta"), rh = wp("rho");
        Expr want = a * vd(o, 1) + sg * b * make_pow(vd(o, 0), 2) * vd(o, 1) +
                    dl * make_pow(b, 3) * vd(o, 1) * vd(o, 2) +
                    rh * make_pow(b, 3) * vd(o, 0) * vd(o, 3) +
                    make_pow(b, 5) * vd(o, 5);
        CHECK(equal(o.lhs, want));
    }
    {
        OdeSpec o = reduced("u_t + 6*u*u_x + u_xxx - u_xxxxx = 0");
        Expr a = wp("alpha"), b = wp("beta");
        Expr want = a * vd(o, 1) + make_int(6) * b * vd(o, 0) * vd(o, 1) +
                    make_pow(b, 3) * vd(o, 3) -
                    make_pow(b, 5) * vd(o, 5);
        CHECK(equal(o.lhs, want));
    }
}

TEST_CASE("standard wave parameters follow the independent variables") {
    PdeSpec p = parse_pde("u_t + u*u_x = 0");
    WaveSub w = standard_wave(p);
    REQUIRE(w.wave_params.size() == 2);
    CHECK(w.wave_params[0].name() == "alpha"); // t
    CHECK(w.wave_params[1].name() == "beta");  // x
    CHECK(w.wave_var.name() == "y");
}

TEST_CASE("mixed derivatives map to wave-parameter products") {
    // u_{tx} -> alpha*beta*v'', u_{ttx} -> alpha^2*beta*v'''
    {
        OdeSpec o = reduced("u_tx + u = 0");
        Expr want = wp("alpha") * wp("beta") * vd(o, 2) + vd(o, 0);
        CHECK(equal(o.lhs, want));
    }
    {
        OdeSpec o = reduced("u_ttx + u*u_x = 0");
        Expr want = make_pow(wp("alpha"), 2) * wp("beta") * vd(o, 3) +
                    wp("beta") * vd(o, 0) * vd(o, 1);
        CHECK(equal(o.lhs, want));
    }
}

TEST_CASE("reduction is linear and multiplicative on monomials") {
    PdeSpec p = parse_pde("u_t + 6*u*u_x + u_xxx - u_xxxxx = 0");
    WaveSub w = standard_wave(p);
    OdeSpec o = reduce_pde(p, w);
    OdePoly collected = OdePoly::from_expr(o.lhs, o.dependent, o.variable);
    CHECK(collected.max_order() == 5);
    // round trip through the collected form
    OdePoly again = OdePoly::from_expr(collected.to_expr(o.dependent, o.variable),
                                       o.dependent, o.variable);
    CHECK(collected.terms() == again.terms());
}

TEST_CASE("ode monomial bookkeeping") {
    PdeSpec p = parse_pde("u_xx + u*u_x - u_t + u - u^2 = 0");
    WaveSub w = standard_wave(p);
    OdeSpec o = reduce_pde(p, w);
    auto monos = ode_monomials(o);
    REQUIRE(monos.size() >= 2);
    // The first designated monomial carries the highest derivative order.
    unsigned top = 0;
    for (auto& m : monos) top = std::max(top, m.max_order());
    CHECK(monos[0].max_order() == top);
    CHECK(monos[0].max_order() == 2);
    // The balance partner is nonlinear.
    CHECK(monos[1].v_degree() >= 2);
    for (auto& m : monos) {
        CHECK(m.v_degree() >= 1);
        unsigned weight = 0;
        for (std::size_t k = 0; k < m.key.size(); ++k)
            weight += static_cast<unsigned>(k) * m.key[k];
        CHECK(m.deriv_weight() == weight);
    }
}

TEST_CASE("single-monomial equations are flagged as quadrature") {
    PdeSpec p = parse_pde("u_xx = 0");
    WaveSub w = standard_wave(p);
    CHECK_THROWS_AS(ode_monomials(reduce_pde(p, w)), SolvableByQuadrature);
}
