#pragma once

#include "fexpand/collect.hpp"
#include "fexpand/groebner.hpp"

#include <set>
#include <string>
#include <vector>

namespace fex {

struct SolveBudget {
    unsigned max_depth = 10;
    unsigned max_branches = 4096;
};

struct SolutionFamily {
    // Solved symbol -> value in the remaining free symbols.
    std::map<Sym, RatFun> assignment;
    std::set<Sym> free_syms;
    // Expressions assumed nonvanishing along this branch.
    std::vector<ParamPoly> side_conditions;
    std::vector<std::string> provenance;
};

struct SolveResult {
    std::vector<SolutionFamily> families;
    bool complete = true;     // false when the budget cut branches off
    bool budget_hit = false;  // some branch was dropped for depth/branch budget
    std::vector<std::string> notes; // certificates and unresolved branches
};

SolveResult solve_system(const AlgSystem& s, const SolveBudget& budget = {});

// p with x replaced by the rational function v.
RatFun ratfun_substitute(const ParamPoly& p, Sym x, const RatFun& v);

// p evaluated under a full assignment (symbols absent from the map stay).
RatFun ratfun_eval(const ParamPoly& p, const std::map<Sym, RatFun>& assign);

// Rational roots of a univariate polynomial (exact; via the rational root
// theorem). Returns roots and the multiplicity-free remaining degree after
// dividing all rational linear factors out.
struct RationalRoots {
    std::vector<Rational> roots; // with multiplicity
    unsigned remaining_degree = 0;
};
RationalRoots rational_roots(const ParamPoly& p, Sym x);

} // namespace fex
