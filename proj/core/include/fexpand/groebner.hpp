#pragma once

#include "fexpand/parampoly.hpp"

#include <vector>

namespace fex {

// Reduced Groebner basis in pure lexicographic order (vars[0] highest).
// Every symbol occurring in eqs must be listed in vars; coefficients are
// rational. Returns {1} for inconsistent ideals.
std::vector<ParamPoly> groebner_lex(const std::vector<ParamPoly>& eqs,
                                    const std::vector<Sym>& vars,
                                    std::size_t pair_limit = 20000);

} // namespace fex
