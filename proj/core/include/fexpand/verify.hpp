#pragma once

#include "fexpand/algsolve.hpp"
#include "fexpand/pdeparse.hpp"

#include <string>
#include <vector>

namespace fex {

// Quadratic extension relation sym^2 = square (eps^2 = 1, s^2 = 13).
struct QuadRelation {
    Sym sym{};
    Rational square;
};

struct ClosedFormSolution {
    Expr expression; // named kernels applied to one shared affine phase
    std::set<Sym> free_params;
    std::vector<ParamPoly> side_conditions;
    std::vector<QuadRelation> relations;
};

struct ResidualReport {
    bool zero = false;
    std::string residual;        // canonical residual, empty iff zero
    std::vector<double> samples; // |numeric residual| at the sample points
    std::string detail;
};

ResidualReport verify_solution(const ClosedFormSolution& sol, const PdeSpec& p,
                               unsigned samples = 32, unsigned seed = 20240801);

struct SolutionFixture {
    std::string name;
    std::string equation;
    std::vector<std::string> equation_params;
    std::string solution;
    std::vector<std::string> params;
    std::vector<std::string> relations; // strings "s^2=13"
    std::string expect = "zero";        // "zero" | "nonzero"
};

ResidualReport verify_fixture(const SolutionFixture& f);

struct FixtureOutcome {
    std::string name;
    bool zero = false;
    bool as_expected = false;
    std::string residual;
    std::string error;
};

struct CorpusSummary {
    std::vector<FixtureOutcome> outcomes;
    std::size_t zero_count = 0;
    std::size_t mismatches = 0; // outcomes contradicting their expectation
};

CorpusSummary verify_corpus(const std::vector<SolutionFixture>& fixtures);

// Assembles u(x1..xn) from a solved family: coefficients substituted, kernels
// rendered through the aux realization applied to the phase sum alpha_i x_i.
ClosedFormSolution family_to_solution(const SolutionFamily& f, const AnsatzInstance& a,
                                      const AuxSystem& aux, const WaveSub& w,
                                      const PdeSpec& p);

// Display function names for the kernels of a builtin system
// (tanh -> {tanh}, sinh-cosh -> {cosh, sinh}, ...).
std::vector<std::string> display_kernel_names(const AuxSystem& aux);

} // namespace fex
