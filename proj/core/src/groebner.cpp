#include "fexpand/groebner.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fex {

namespace {

using Exp = std::vector<unsigned>; // exponents over vars, lex order

struct LexLess {
    bool operator()(const Exp& a, const Exp& b) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

// Internal dense-variable polynomial: term map in descending lex handled by
// taking rbegin as the leading term.
using Poly = std::map<Exp, Rational, LexLess>;

Poly from_parampoly(const ParamPoly& p, const std::map<Sym, std::size_t>& idx,
                    std::size_t n) {
    Poly r;
    for (auto& [m, c] : p.terms()) {
        Exp e(n, 0);
        for (auto& [s, k] : m) {
            auto it = idx.find(s);
            if (it == idx.end())
                throw std::invalid_argument("symbol " + s.name() +
                                            " is not in the variable list");
            e[it->second] += k;
        }
        auto [pos, fresh] = r.emplace(std::move(e), c);
        if (!fresh) pos->second += c;
    }
    for (auto it = r.begin(); it != r.end();)
        it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

ParamPoly to_parampoly(const Poly& p, const std::vector<Sym>& vars) {
    ParamPoly r;
    for (auto& [e, c] : p) {
        Mono m;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) m.emplace_back(vars[i], e[i]);
        std::sort(m.begin(), m.end());
        r += ParamPoly::term(std::move(m), c);
    }
    return r;
}

void add_term(Poly& p, Exp e, const Rational& c) {
    if (c == 0) return;
    auto it = p.find(e);
    if (it == p.end())
        p.emplace(std::move(e), c);
    else {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

const std::pair<const Exp, Rational>& leading(const Poly& p) { return *p.rbegin(); }

bool divides(const Exp& a, const Exp& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Exp quotient(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Exp lcm_exp(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

// Deterministic work budget: term operations across one groebner_lex call.
constexpr std::size_t kWorkLimit = 300000;

// p -= c * x^e * q
void submul(Poly& p, const Rational& c, const Exp& e, const Poly& q, std::size_t& work) {
    work += q.size();
    if (work > kWorkLimit) throw std::runtime_error("groebner work budget exhausted");
    if (boost::multiprecision::msb(boost::multiprecision::abs(num(c)) + 1) > 2048 ||
        boost::multiprecision::msb(den(c)) > 2048)
        throw std::runtime_error("groebner coefficient budget exhausted");
    for (auto& [qe, qc] : q) {
        Exp ne(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) ne[i] = e[i] + qe[i];
        add_term(p, std::move(ne), -(c * qc));
    }
}

Poly normal_form(Poly p, const std::vector<Poly>& basis, std::size_t& work) {
    Poly rem;
    while (!p.empty()) {
        auto& [le, lc] = leading(p);
        bool reduced = false;
        for (auto& g : basis) {
            auto& [ge, gc] = leading(g);
            if (divides(ge, le)) {
                submul(p, lc / gc, quotient(le, ge), g, work);
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            add_term(rem, le, lc);
            p.erase(std::prev(p.end()));
        }
    }
    return rem;
}

void make_monic(Poly& p) {
    if (p.empty()) return;
    Rational lc = leading(p).second;
    for (auto& [e, c] : p) c /= lc;
}

} // namespace

std::vector<ParamPoly> groebner_lex(const std::vector<ParamPoly>& eqs,
                                    const std::vector<Sym>& vars,
                                    std::size_t pair_limit) {
    std::map<Sym, std::size_t> idx;
    for (std::size_t i = 0; i < vars.size(); ++i)
        idx.emplace(vars[i], i); // slot 0 most significant: vars[0] highest

    std::vector<Poly> basis;
    for (auto& e : eqs) {
        Poly p = from_parampoly(e, idx, vars.size());
        if (!p.empty()) {
            make_monic(p);
            basis.push_back(std::move(p));
        }
    }

    auto total = [](const Exp& e) {
        unsigned t = 0;
        for (unsigned k : e) t += k;
        return t;
    };
    auto pair_deg = [&](std::size_t i, std::size_t j) {
        return total(lcm_exp(leading(basis[i]).first, leading(basis[j]).first));
    };

    std::vector<std::tuple<unsigned, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            pairs.emplace_back(pair_deg(i, j), i, j);

    std::size_t work = 0;
    std::size_t handled = 0;
    while (!pairs.empty()) {
        if (++handled > pair_limit)
            throw std::runtime_error("groebner pair budget exhausted");
        // normal selection: the pair with the smallest lcm degree first
        auto best = std::min_element(pairs.begin(), pairs.end());
        std::swap(*best, pairs.back());
        auto [deg, i, j] = pairs.back();
        pairs.pop_back();
        (void)deg;
        auto& [ei, ci] = leading(basis[i]);
        auto& [ej, cj] = leading(basis[j]);
        Exp l = lcm_exp(ei, ej);
        // Buchberger's first criterion: coprime leading terms
        bool coprime = true;
        for (std::size_t k = 0; k < l.size(); ++k)
            if (ei[k] && ej[k]) coprime = false;
        if (coprime) continue;
        Poly s;
        submul(s, Rational(-1) / ci, quotient(l, ei), basis[i], work);
        submul(s, Rational(1) / cj, quotient(l, ej), basis[j], work);
        Poly r = normal_form(std::move(s), basis, work);
        if (r.empty()) continue;
        if (r.size() > 400 || total(leading(r).first) > 40 || basis.size() > 120)
            throw std::runtime_error("groebner size budget exhausted");
        for (auto& [e, c] : r)
            if (boost::multiprecision::msb(boost::multiprecision::abs(num(c)) + 1) > 2048 ||
                boost::multiprecision::msb(den(c)) > 2048)
                throw std::runtime_error("groebner coefficient budget exhausted");
        make_monic(r);
        basis.push_back(std::move(r));
        for (std::size_t k = 0; k + 1 < basis.size(); ++k)
            pairs.emplace_back(pair_deg(k, basis.size() - 1), k, basis.size() - 1);
    }

    // inter-reduce
    std::vector<Poly> reduced;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        std::vector<Poly> others;
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (j != i) others.push_back(basis[j]);
        Poly r = normal_form(basis[i], others, work);
        if (!r.empty()) {
            make_monic(r);
            reduced.push_back(std::move(r));
        }
    }
    // a second pass stabilizes the set after removals
    std::vector<Poly> final_basis;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        std::vector<Poly> others;
        for (std::size_t j = 0; j < reduced.size(); ++j)
            if (j != i) others.push_back(reduced[j]);
        Poly r = normal_form(reduced[i], others, work);
        if (!r.empty()) {
            make_monic(r);
            final_basis.push_back(std::move(r));
        }
    }

    std::vector<ParamPoly> out;
    for (auto& p : final_basis) out.push_back(to_parampoly(p, vars));
    std::sort(out.begin(), out.end(), [](const ParamPoly& a, const ParamPoly& b) {
        if (a.total_deg() != b.total_deg()) return a.total_deg() < b.total_deg();
        return a.str() < b.str();
    });
    return out;
}

} // namespace fex
