#include "doctest.h"

#include "fexpand/auxreg.hpp"

#include <cmath>
#include <map>
#include <random>
#include <vector>

using namespace fex;

namespace {

// Numeric value of a marker-free Laurent form given kernel and parameter values.
double eval_form(const LaurentForm& f, const std::vector<double>& kernel_vals,
                 const std::map<Sym, double>& param_vals) {
    double total = 0.0;
    for (auto& [key, coeff] : f.terms()) {
        REQUIRE(key.markers == 0u);
        double term = coeff.eval_double(param_vals);
        for (std::size_t j = 0; j < key.exps.size(); ++j)
            term *= std::pow(kernel_vals[j], key.exps[j]);
        total += term;
    }
    return total;
}

bool marker_free(const LaurentForm& f) {
    for (auto& [key, coeff] : f.terms())
        if (key.markers != 0) return false;
    return true;
}

LaurentForm random_form(const AuxSystem& aux, std::mt19937& rng) {
    std::uniform_int_distribution<int> termd(1, 3);
    std::uniform_int_distribution<int> expd(0, 2);
    std::uniform_int_distribution<int> coefd(-3, 3);
    LaurentForm f(aux.kernels());
    int terms = termd(rng);
    for (int i = 0; i < terms; ++i) {
        LKey key;
        key.exps.resize(aux.arity());
        for (auto& e : key.exps) e = expd(rng);
        f.add_term(std::move(key), ParamPoly(Rational(coefd(rng))));
    }
    return f;
}

} // namespace

TEST_CASE("all nine builtin rule systems are registered") {
    auto& names = AuxSystem::builtin_names();
    REQUIRE(names.size() == 9);
    for (auto& n : names) {
        AuxSystem aux = AuxSystem::builtin(n);
        CHECK(aux.name() == n);
        CHECK(aux.arity() >= 1);
        CHECK(aux.arity() <= 3);
    }
}

TEST_CASE("identities hold and stay invariant under the derivative rules") {
    for (auto& n : AuxSystem::builtin_names()) {
        CAPTURE(n);
        AuxSystem aux = AuxSystem::builtin(n);
        for (auto& id : aux.identities()) {
            LaurentForm lhs =
                LaurentForm::kernel_power(aux.kernels(), id.eliminable, 2);
            LaurentForm rel = lhs - id.square_value;
            CHECK(aux.is_zero(rel));
            // d/dxi of a constant relation must vanish under the same rules:
            // this couples every kernel's derivative rule to the identity.
            CHECK(aux.is_zero(aux.derivative(rel)));
        }
    }
}

TEST_CASE("derivative is a derivation for every builtin") {
    for (auto& n : AuxSystem::builtin_names()) {
        CAPTURE(n);
        AuxSystem aux = AuxSystem::builtin(n);
        std::mt19937 rng(101);
        for (int iter = 0; iter < 20; ++iter) {
            LaurentForm f = random_form(aux, rng);
            LaurentForm g = random_form(aux, rng);
            LaurentForm lhs = aux.derivative(aux.mul(f, g));
            LaurentForm rhs =
                aux.mul(aux.derivative(f), g) + aux.mul(f, aux.derivative(g));
            CHECK(aux.is_zero(lhs - rhs));
        }
    }
}

TEST_CASE("repeated first derivatives match the memoized higher rules") {
    for (auto& n : AuxSystem::builtin_names()) {
        CAPTURE(n);
        AuxSystem aux = AuxSystem::builtin(n);
        for (std::size_t i = 0; i < aux.arity(); ++i) {
            LaurentForm f = LaurentForm::kernel_power(aux.kernels(), i, 1);
            LaurentForm twice = aux.derivative(aux.derivative(f));
            CHECK(aux.is_zero(twice - aux.dkernel(i, 2)));
            LaurentForm thrice = aux.derivative(twice);
            CHECK(aux.is_zero(thrice - aux.dkernel(i, 3)));
        }
    }
}

TEST_CASE("derivative rules agree with finite differences") {
    const double xi = 0.31;
    const double h = 1e-6;
    for (auto& n : AuxSystem::builtin_names()) {
        CAPTURE(n);
        AuxSystem aux = AuxSystem::builtin(n);
        if (!aux.numeric_supported()) continue;
        std::map<Sym, double> vals;
        double mv = 0.29;
        for (Sym m : aux.modulus_params()) vals[m] = (mv += 0.1);
        std::vector<double> lo = aux.eval_kernels(xi - h, vals);
        std::vector<double> hi = aux.eval_kernels(xi + h, vals);
        std::vector<double> mid = aux.eval_kernels(xi, vals);
        for (std::size_t i = 0; i < aux.arity(); ++i) {
            LaurentForm df = aux.apply_rules(aux.dkernel(i, 1));
            if (!marker_free(df)) continue;
            double rule_val = eval_form(df, mid, vals);
            double fd = (hi[i] - lo[i]) / (2 * h);
            CHECK(rule_val == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("marker reduction eliminates higher derivative markers") {
    AuxSystem aux = AuxSystem::builtin("tanh");
    Sym F = aux.kernels()[0];
    Expr e = make_dmarker(F, 3);
    Expr r = reduce_marker(e, aux);
    Expr again = reduce_marker(r, aux);
    CHECK(equal(r, again));
    CHECK(to_string(r).find("D3") == std::string::npos);
    CHECK(to_string(r).find("D2") == std::string::npos);
    // tanh: F' = 1 - F^2, so F''' reduces to a polynomial in F alone.
    CHECK(to_string(r).find("D1") == std::string::npos);

    // tanh''' = -2 + 8 tanh^2 - 6 tanh^4 ... cross-check numerically
    LaurentForm d3 = aux.apply_rules(aux.dkernel(0, 3));
    double v = eval_form(d3, {std::tanh(0.31)}, {});
    double t = std::tanh(0.31);
    double expected = -2 + 8 * t * t - 6 * t * t * t * t;
    CHECK(v == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("power and product reduction agree") {
    for (auto& n : AuxSystem::builtin_names()) {
        AuxSystem aux = AuxSystem::builtin(n);
        std::mt19937 rng(202);
        LaurentForm f = random_form(aux, rng);
        LaurentForm p3 = aux.pow(f, 3);
        LaurentForm m3 = aux.mul(aux.mul(f, f), f);
        CHECK(aux.is_zero(p3 - m3));
    }
}
