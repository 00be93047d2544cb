#pragma once

#include "fexpand/ansatz.hpp"

#include <vector>

namespace fex {

// Canonical residual of the substituted ODE: a Laurent polynomial over the
// kernels (markers only for quadratic-rule kernels) together with the
// denominator-clearing exponent vector applied to reach it.
struct ResidualDecomposition {
    LaurentForm residual;
    std::vector<unsigned> cleared;
};

struct AlgSystem {
    std::vector<ParamPoly> equations; // each = 0, normalized, deduplicated
    std::vector<Sym> unknowns;
    std::vector<Sym> nonzero; // side conditions: these never vanish
};

ResidualDecomposition substitute(const OdeSpec& o, const AnsatzInstance& a,
                                 const AuxSystem& aux);

AlgSystem extract_system(const ResidualDecomposition& r, std::vector<Sym> unknowns);

// Deterministic total order on parameter polynomials (used for equation and
// family ordering).
bool poly_less(const ParamPoly& a, const ParamPoly& b);

} // namespace fex
