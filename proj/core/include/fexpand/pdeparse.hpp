#pragma once

#include "fexpand/expr.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fex {

struct PdeSpec {
    Sym dependent{};
    std::vector<Sym> independents; // sorted by name (t before x)
    Expr lhs;                      // polynomial in the dependent and its derivatives
    std::set<Sym> params;
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + what),
          position(pos) {}
};

// Parses "expr = 0" in the equation grammar. The dependent variable is the
// identifier carrying derivative subscripts; subscript letters become the
// independent variables. Identifiers in `declared_params` are parameters;
// everything else is rejected.
PdeSpec parse_pde(const std::string& text, const std::vector<std::string>& declared_params = {});

enum class PrintStyle { Ascii, Latex };

// Round trip: parse_pde(print_pde(p)) is structurally equal to p.
std::string print_pde(const PdeSpec& p, PrintStyle style = PrintStyle::Ascii);

// Extended expression grammar used by solution fixtures: adds division,
// parenthesized negative exponents and kernel calls name(arg). `idents` maps
// each allowed identifier to its symbol; `kernels` are callable names.
struct ExprParseContext {
    std::map<std::string, Sym> idents;
    std::map<std::string, Sym> kernels;
};

Expr parse_expr(const std::string& text, const ExprParseContext& ctx);

} // namespace fex
