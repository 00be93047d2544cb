#include "doctest.h"

#include "fexpand/groebner.hpp"

#include <algorithm>
#include <map>
#include <vector>

using namespace fex;

namespace {

std::vector<Sym> gb_vars() {
    return {symtab::intern("gb_x", SymKind::AnsatzCoeff),
            symtab::intern("gb_y", SymKind::AnsatzCoeff)};
}

bool contains(const std::vector<ParamPoly>& basis, const ParamPoly& p) {
    return std::any_of(basis.begin(), basis.end(),
                       [&](const ParamPoly& q) { return q == p || q == -p; });
}

} // namespace

TEST_CASE("groebner basis of a zero-dimensional ideal") {
    auto v = gb_vars();
    Sym x = v[0], y = v[1];
    // {x^2 + y^2 - 1, x - y}: reduced lex basis {x - y, y^2 - 1/2}
    std::vector<ParamPoly> eqs = {
        ParamPoly(x, 2) + ParamPoly(y, 2) - ParamPoly(Rational(1)),
        ParamPoly(x) - ParamPoly(y),
    };
    auto gb = groebner_lex(eqs, {x, y});
    REQUIRE(gb.size() == 2);
    CHECK(contains(gb, ParamPoly(x) - ParamPoly(y)));
    CHECK(contains(gb, ParamPoly(y, 2) - ParamPoly(Rational(1) / Rational(2))));
}

TEST_CASE("elimination order projects out the leading variable") {
    auto v = gb_vars();
    Sym x = v[0], y = v[1];
    // {x^2 - y, y - 4}: eliminating x leaves y - 4; back-substituted x^2 - 4
    std::vector<ParamPoly> eqs = {ParamPoly(x, 2) - ParamPoly(y),
                                  ParamPoly(y) - ParamPoly(Rational(4))};
    auto gb = groebner_lex(eqs, {x, y});
    CHECK(contains(gb, ParamPoly(y) - ParamPoly(Rational(4))));
    CHECK(contains(gb, ParamPoly(x, 2) - ParamPoly(Rational(4))));
}

TEST_CASE("inconsistent ideals collapse to one") {
    auto v = gb_vars();
    Sym x = v[0];
    std::vector<ParamPoly> eqs = {ParamPoly(x), ParamPoly(x) + ParamPoly(Rational(1))};
    auto gb = groebner_lex(eqs, {x});
    REQUIRE(gb.size() == 1);
    CHECK(gb[0].is_constant());
}

TEST_CASE("basis computation is idempotent") {
    auto v = gb_vars();
    Sym x = v[0], y = v[1];
    std::vector<ParamPoly> eqs = {
        ParamPoly(x, 2) * ParamPoly(y) - ParamPoly(Rational(1)),
        ParamPoly(x) * ParamPoly(y, 2) - ParamPoly(x),
    };
    auto gb = groebner_lex(eqs, {x, y});
    auto gb2 = groebner_lex(gb, {x, y});
    auto key = [](const ParamPoly& p) { return p.str(); };
    std::vector<std::string> a, b;
    for (auto& p : gb) a.push_back(key(p));
    for (auto& p : gb2) b.push_back(key(p));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("common roots of the input are roots of the basis") {
    auto v = gb_vars();
    Sym x = v[0], y = v[1];
    // planted root (3, -2)
    std::map<Sym, Rational> pt{{x, Rational(3)}, {y, Rational(-2)}};
    std::vector<ParamPoly> eqs = {
        (ParamPoly(x) - ParamPoly(Rational(3))) * ParamPoly(y),
        ParamPoly(y) + ParamPoly(Rational(2)),
        (ParamPoly(x) - ParamPoly(Rational(3))) * (ParamPoly(y) + ParamPoly(Rational(2))),
    };
    for (auto& e : eqs) REQUIRE(e.eval(pt) == 0);
    auto gb = groebner_lex(eqs, {x, y});
    CHECK(!gb.empty());
    for (auto& g : gb) CHECK(g.eval(pt) == 0);
}
