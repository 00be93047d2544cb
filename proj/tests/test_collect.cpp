#include "doctest.h"

#include "fexpand/collect.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

using namespace fex;

namespace {

// Truncated Taylor jets around a point, exact rational coefficients.
// Independent oracle for the Laurent-calculus collection: the substituted
// ODE is re-evaluated through jet arithmetic seeded only by the first-order
// rule F' = 1 - F^2, with no shared code path.
// jet_deriv loses the top coefficient, and the marker block differentiates
// the kernel jet once more, so keep two spare orders above the ODE order
constexpr std::size_t kJetLen = 8;

using Jet = std::vector<Rational>;

Jet jet_const(const Rational& c) {
    Jet j(kJetLen, Rational(0));
    j[0] = c;
    return j;
}

Jet jet_add(const Jet& a, const Jet& b) {
    Jet r(kJetLen);
    for (std::size_t k = 0; k < kJetLen; ++k) r[k] = a[k] + b[k];
    return r;
}

Jet jet_mul(const Jet& a, const Jet& b) {
    Jet r(kJetLen, Rational(0));
    for (std::size_t i = 0; i < kJetLen; ++i)
        for (std::size_t j = 0; i + j < kJetLen; ++j) r[i + j] += a[i] * b[j];
    return r;
}

Jet jet_scale(const Jet& a, const Rational& c) {
    Jet r(kJetLen);
    for (std::size_t k = 0; k < kJetLen; ++k) r[k] = a[k] * c;
    return r;
}

// d/dxi shifts Taylor coefficients down.
Jet jet_deriv(const Jet& a) {
    Jet r(kJetLen, Rational(0));
    for (std::size_t k = 0; k + 1 < kJetLen; ++k)
        r[k] = a[k + 1] * Rational(static_cast<long>(k + 1));
    return r;
}

Jet jet_inverse(const Jet& a) {
    REQUIRE(a[0] != 0);
    Jet r(kJetLen, Rational(0));
    r[0] = Rational(1) / a[0];
    for (std::size_t k = 1; k < kJetLen; ++k) {
        Rational s(0);
        for (std::size_t j = 1; j <= k; ++j) s += a[j] * r[k - j];
        r[k] = -s / a[0];
    }
    return r;
}

Jet jet_ipow(const Jet& a, int e) {
    Jet base = e < 0 ? jet_inverse(a) : a;
    int n = e < 0 ? -e : e;
    Jet r = jet_const(Rational(1));
    for (int i = 0; i < n; ++i) r = jet_mul(r, base);
    return r;
}

// tanh jet from the value F0 alone, via F' = 1 - F^2.
Jet tanh_jet(const Rational& f0) {
    Jet f(kJetLen, Rational(0));
    f[0] = f0;
    for (std::size_t k = 0; k + 1 < kJetLen; ++k) {
        // coefficient k of 1 - f^2, using entries 0..k only
        Rational sq(0);
        for (std::size_t j = 0; j <= k; ++j) sq += f[j] * f[k - j];
        Rational rhs = (k == 0 ? Rational(1) : Rational(0)) - sq;
        f[k + 1] = rhs / Rational(static_cast<long>(k + 1));
    }
    return f;
}

Rational eval_laurent(const LaurentForm& f, const Rational& f0,
                      const std::map<Sym, Rational>& vals) {
    Rational total(0);
    for (auto& [key, coeff] : f.terms()) {
        REQUIRE(key.markers == 0u);
        Rational term = coeff.eval(vals);
        int e = key.exps[0];
        Rational p(1);
        for (int i = 0; i < (e < 0 ? -e : e); ++i) p *= f0;
        total += e < 0 ? Rational(term / p) : Rational(term * p);
    }
    return total;
}

struct Pipeline {
    PdeSpec p;
    WaveSub w;
    OdeSpec o;
    AuxSystem aux = AuxSystem::builtin("tanh");
    AnsatzInstance inst;
    ResidualDecomposition rd;
};

Pipeline make_pipeline(const std::string& eq, unsigned order) {
    Pipeline pl{parse_pde(eq)};
    pl.w = standard_wave(pl.p);
    pl.o = reduce_pde(pl.p, pl.w);
    pl.inst = build(AnsatzShape::uniform(1, order), pl.aux);
    pl.rd = substitute(pl.o, pl.inst, pl.aux);
    return pl;
}

void cross_check(const std::string& eq, unsigned order, int instances) {
    Pipeline pl = make_pipeline(eq, order);
    OdePoly ode = OdePoly::from_expr(pl.o.lhs, pl.o.dependent, pl.o.variable);
    unsigned max_order = ode.max_order();
    REQUIRE(max_order < kJetLen);

    std::mt19937 rng(20240801);
    std::uniform_int_distribution<int> coefd(-3, 3);
    std::uniform_int_distribution<int> numd(-9, 9);
    std::uniform_int_distribution<int> dend(10, 13);

    for (int iter = 0; iter < instances; ++iter) {
        std::map<Sym, Rational> vals;
        for (Sym s : pl.inst.coeff_syms) vals[s] = Rational(coefd(rng)) / Rational(2);
        for (Sym s : pl.w.wave_params) {
            int v = coefd(rng);
            vals[s] = Rational(v ? v : 1);
        }
        int n = numd(rng);
        Rational f0 = Rational(n ? n : 1) / Rational(dend(rng));

        // oracle: assemble v as a jet and run the ODE through jet arithmetic
        Jet F = tanh_jet(f0);
        Jet Fp = jet_deriv(F);
        Jet v = jet_const(Rational(0));
        for (auto& [mask, block] : pl.inst.coeffs)
            for (auto& [exps, sym] : block) {
                Jet t = jet_scale(jet_ipow(F, exps[0]), vals.at(sym));
                if (mask & 1u) t = jet_mul(t, Fp);
                v = jet_add(v, t);
            }
        std::vector<Rational> vk; // v^{(k)}(xi0)
        Jet cur = v;
        for (unsigned k = 0; k <= max_order; ++k) {
            vk.push_back(cur[0]);
            cur = jet_deriv(cur);
        }
        Rational ode_val(0);
        for (auto& [key, coeff] : ode.terms()) {
            Rational term = coeff.eval(vals);
            for (std::size_t k = 0; k < key.size(); ++k)
                for (unsigned j = 0; j < key[k]; ++j) term *= vk[k];
            ode_val += term;
        }

        // engine: the collected residual, evaluated at the same point
        Rational res_val = eval_laurent(pl.rd.residual, f0, vals);
        Rational clear(1);
        for (unsigned j = 0; j < pl.rd.cleared[0]; ++j) clear *= f0;
        CHECK(res_val == ode_val * clear);
    }
}

} // namespace

TEST_CASE("collected residual matches jet arithmetic: second-order equation") {
    cross_check("u_xx + u*u_x - u_t + u - u^2 = 0", 1, 200);
}

TEST_CASE("collected residual matches jet arithmetic: fifth-order cubic family") {
    cross_check("u_t + 5*u^2*u_x + 5*u_x*u_xx + 5*u*u_xxx + u_xxxxx = 0", 2, 200);
}

TEST_CASE("collected residual matches jet arithmetic: fifth-order quadratic") {
    cross_check("u_t + 6*u*u_x + u_xxx - u_xxxxx = 0", 4, 200);
}

TEST_CASE("extract_system splits the residual by kernel exponent") {
    Pipeline pl = make_pipeline("u_xx + u*u_x - u_t + u - u^2 = 0", 1);
    std::vector<Sym> unknowns = pl.inst.coeff_syms;
    for (Sym s : pl.w.wave_params) unknowns.push_back(s);
    AlgSystem sys = extract_system(pl.rd, unknowns);
    CHECK(!sys.equations.empty());
    CHECK(sys.unknowns == unknowns);
    for (auto& e : sys.equations) {
        CHECK(!e.is_zero());
        CHECK(e == e.normalized());
    }
    // equations are deduplicated
    for (std::size_t i = 0; i < sys.equations.size(); ++i)
        for (std::size_t j = i + 1; j < sys.equations.size(); ++j)
            CHECK(!(sys.equations[i] == sys.equations[j]));
}
