#include "fexpand/algsolve.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <deque>
#include <numeric>
#include <optional>
#include <sstream>

namespace fex {

namespace {

RatFun rf_mul(const RatFun& a, const RatFun& b) { return {a.num * b.num, a.den * b.den}; }

Mono mono_content(const ParamPoly& p) {
    Mono g = p.leading_mono();
    for (auto& [m, c] : p.terms()) {
        Mono next;
        auto ig = g.begin();
        for (auto& [s, k] : m) {
            while (ig != g.end() && ig->first < s) ++ig;
            if (ig != g.end() && ig->first == s)
                next.emplace_back(s, std::min(ig->second, k));
        }
        g = std::move(next);
        if (g.empty()) break;
    }
    return g;
}

ParamPoly mono_divide(const ParamPoly& e, const Mono& g) {
    ParamPoly r;
    for (auto& [m, c] : e.terms()) {
        Mono nm;
        auto ig = g.begin();
        for (auto& [s, k] : m) {
            unsigned sub = 0;
            while (ig != g.end() && ig->first < s) ++ig;
            if (ig != g.end() && ig->first == s) sub = ig->second;
            if (k > sub) nm.emplace_back(s, k - sub);
        }
        r += ParamPoly::term(std::move(nm), c);
    }
    return r;
}

RatFun rf_normalize(RatFun r) {
    // zero denominator: poisoned value, the branch dies at its side-condition
    // or emit checks
    if (r.den.is_zero()) return {ParamPoly(Rational(1)), ParamPoly()};
    if (r.num.is_zero()) return {ParamPoly(), ParamPoly(Rational(1))};
    // cancel the common monomial content (values agree off the denominator's
    // zero set, which the family excludes anyway)
    Mono gn = mono_content(r.num), gd = mono_content(r.den), g;
    auto ig = gd.begin();
    for (auto& [s, k] : gn) {
        while (ig != gd.end() && ig->first < s) ++ig;
        if (ig != gd.end() && ig->first == s) g.emplace_back(s, std::min(k, ig->second));
    }
    if (!g.empty()) {
        r.num = mono_divide(r.num, g);
        r.den = mono_divide(r.den, g);
    }
    Rational cn = r.num.content(), cd = r.den.content();
    if (r.den.leading_coeff() < 0) cd = -cd;
    ParamPoly num = r.num * Rational(1 / cn);
    ParamPoly den = r.den * Rational(1 / cd);
    RatFun out{num * Rational(cn / cd), den};
    if (out.den == ParamPoly(Rational(1))) out.den = ParamPoly(Rational(1));
    return out;
}

} // namespace

RatFun ratfun_substitute(const ParamPoly& p, Sym x, const RatFun& v) {
    auto coeffs = p.coeffs_in(x);
    std::size_t deg = coeffs.size() - 1;
    ParamPoly num;
    for (std::size_t i = 0; i <= deg; ++i)
        num += coeffs[i] * v.num.pow(static_cast<unsigned>(i)) *
               v.den.pow(static_cast<unsigned>(deg - i));
    return rf_normalize({num, v.den.pow(static_cast<unsigned>(deg))});
}

RatFun ratfun_eval(const ParamPoly& p, const std::map<Sym, RatFun>& assign) {
    RatFun r{p, ParamPoly(Rational(1))};
    for (auto& [x, v] : assign) {
        if (!r.num.depends_on(x) && !r.den.depends_on(x)) continue;
        RatFun n = ratfun_substitute(r.num, x, v);
        RatFun d = ratfun_substitute(r.den, x, v);
        r = rf_normalize({n.num * d.den, n.den * d.num});
    }
    return r;
}

namespace {

std::vector<BigInt> divisors(const BigInt& n, bool& exhaustive) {
    std::vector<BigInt> out{1};
    BigInt m = n < 0 ? BigInt(-n) : n;
    std::map<BigInt, unsigned> fac;
    for (BigInt p = 2; p * p <= m; ++p) {
        if (p > 1000000) {
            exhaustive = false;
            break;
        }
        while (m % p == 0) {
            fac[p] += 1;
            m /= p;
        }
    }
    if (m > 1) fac[m] += 1;
    for (auto& [p, k] : fac) {
        std::size_t sz = out.size();
        BigInt pw = 1;
        for (unsigned i = 1; i <= k; ++i) {
            pw *= p;
            for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pw);
        }
    }
    return out;
}

} // namespace

RationalRoots rational_roots(const ParamPoly& p, Sym x) {
    auto cs = p.coeffs_in(x);
    std::vector<Rational> c;
    for (auto& q : cs) {
        if (!q.is_constant())
            throw std::invalid_argument("rational_roots needs a univariate polynomial");
        c.push_back(q.constant_value());
    }
    while (!c.empty() && c.back() == 0) c.pop_back();
    RationalRoots rr;
    if (c.size() <= 1) return rr; // zero or nonzero constant: no roots in x
    // factor out x^k
    std::size_t low = 0;
    while (low < c.size() && c[low] == 0) ++low;
    for (std::size_t i = 0; i < low; ++i) rr.roots.push_back(Rational(0));
    c.erase(c.begin(), c.begin() + static_cast<long>(low));
    // integer-primitive form
    BigInt l = 1;
    for (auto& q : c) l = boost::multiprecision::lcm(l, den(q));
    std::vector<BigInt> a;
    for (auto& q : c) a.push_back(num(q) * (l / den(q)));

    bool exhaustive = true;
    auto eval_at = [&](const Rational& r) {
        Rational acc(0), pw(1);
        for (auto& ai : a) {
            acc += Rational(ai) * pw;
            pw *= r;
        }
        return acc;
    };
    auto deflate = [&](const Rational& r) {
        // synthetic division by (x - r); exact when r is a root
        std::vector<Rational> q(a.size() - 1);
        Rational carry(0);
        for (std::size_t i = a.size(); i-- > 1;) {
            carry = Rational(a[i]) + carry * r;
            q[i - 1] = carry;
        }
        BigInt nl = 1;
        for (auto& qc : q) nl = boost::multiprecision::lcm(nl, den(qc));
        a.clear();
        for (auto& qc : q) a.push_back(num(qc) * (nl / den(qc)));
    };

    bool progress = true;
    while (a.size() > 1 && progress) {
        progress = false;
        auto ps = divisors(a.front(), exhaustive);
        auto qs = divisors(a.back(), exhaustive);
        for (auto& pp : ps) {
            for (auto& qq : qs) {
                for (int sign : {1, -1}) {
                    Rational cand(pp * sign, qq);
                    while (a.size() > 1 && eval_at(cand) == 0) {
                        rr.roots.push_back(cand);
                        deflate(cand);
                        progress = true;
                    }
                }
                if (a.size() <= 1) break;
            }
            if (a.size() <= 1) break;
        }
    }
    rr.remaining_degree = a.size() > 1 ? static_cast<unsigned>(a.size() - 1) : 0;
    if (!exhaustive && rr.remaining_degree > 0)
        rr.remaining_degree |= 0x80000000u; // marks a non-exhaustive search
    return rr;
}

namespace {

struct Branch {
    std::vector<ParamPoly> eqs;
    std::map<Sym, RatFun> assign;
    std::vector<ParamPoly> nonzero;
    unsigned depth = 0;
    std::set<std::string> gb_seen; // equation sets already run through groebner
    std::vector<std::string> trace;
};

class Solver {
public:
    Solver(const AlgSystem& s, const SolveBudget& b) : sys_(s), budget_(b) {
        unknown_set_.insert(s.unknowns.begin(), s.unknowns.end());
        trace_ = std::getenv("FEXPAND_SOLVE_TRACE") != nullptr;
    }

    SolveResult run() {
        Branch root;
        root.eqs = sys_.equations;
        for (Sym s : sys_.nonzero) root.nonzero.push_back(ParamPoly(s));
        stack_.push_back(std::move(root));
        while (!stack_.empty()) {
            if (++processed_ > budget_.max_branches) {
                result_.complete = false;
                result_.budget_hit = true;
                result_.notes.push_back("branch budget exhausted; remaining branches dropped");
                break;
            }
            Branch b = std::move(stack_.back());
            stack_.pop_back();
            if (trace_) {
                std::ostringstream os;
                os << "[solve] #" << processed_ << " depth=" << b.depth
                   << " eqs=" << b.eqs.size() << " stack=" << stack_.size();
                for (auto& e : b.eqs) os << " |e|=" << e.size() << "/d" << e.total_deg();
                fprintf(stderr, "%s\n", os.str().c_str());
            }
            process(std::move(b));
        }
        finalize();
        return std::move(result_);
    }

private:
    // Applies x := v to every equation of b (polynomial clearing for
    // non-polynomial v), to the stored assignment and to the side conditions.
    void apply_assignment(Branch& b, Sym x, const RatFun& v) {
        for (auto& e : b.eqs) {
            if (!e.depends_on(x)) continue;
            e = ratfun_substitute(e, x, v).num.normalized();
        }
        for (auto& [y, w] : b.assign) {
            if (!w.num.depends_on(x) && !w.den.depends_on(x)) continue;
            RatFun n = ratfun_substitute(w.num, x, v);
            RatFun d = ratfun_substitute(w.den, x, v);
            w = rf_normalize({n.num * d.den, n.den * d.num});
        }
        for (auto& c : b.nonzero)
            if (c.depends_on(x)) c = ratfun_substitute(c, x, v).num.normalized();
        b.assign[x] = rf_normalize(v);
    }

    // Divides out monomial factors whose symbols are assumed nonzero and
    // returns the shared monomial over symbols that may still vanish.
    Mono splittable_content(const ParamPoly& e, const Branch& b) const {
        if (e.is_zero()) return {};
        Mono g = e.leading_mono();
        for (auto& [m, c] : e.terms()) {
            Mono next;
            auto ia = g.begin();
            for (auto& [s, k] : m) {
                while (ia != g.end() && ia->first < s) ++ia;
                if (ia != g.end() && ia->first == s)
                    next.emplace_back(s, std::min(ia->second, k));
            }
            g = std::move(next);
            if (g.empty()) break;
        }
        Mono out;
        for (auto& [s, k] : g) {
            bool assumed = false;
            for (auto& nz : b.nonzero)
                if (nz == ParamPoly(s)) assumed = true;
            if (!assumed && unknown_set_.count(s)) out.emplace_back(s, k);
        }
        return out;
    }

    bool simplify(Branch& b) {
        for (auto& e : b.eqs) {
            if (e.is_zero()) continue;
            // drop monomial factors of assumed-nonzero symbols
            Mono g = e.leading_mono();
            for (auto& [m, c] : e.terms()) {
                Mono next;
                auto ia = g.begin();
                for (auto& [s, k] : m) {
                    while (ia != g.end() && ia->first < s) ++ia;
                    if (ia != g.end() && ia->first == s)
                        next.emplace_back(s, std::min(ia->second, k));
                }
                g = std::move(next);
                if (g.empty()) break;
            }
            Mono assumed;
            for (auto& [s, k] : g) {
                bool nz = false;
                for (auto& c : b.nonzero)
                    if (c == ParamPoly(s)) nz = true;
                if (nz) assumed.emplace_back(s, k);
            }
            if (!assumed.empty()) e = mono_divide(e, assumed);
            e = e.normalized();
        }
        std::vector<ParamPoly> kept;
        for (auto& e : b.eqs) {
            if (e.is_zero()) continue;
            if (e.size() > 500 || e.total_deg() > 24) {
                result_.complete = false;
                result_.notes.push_back("dropped a branch on equation growth (" +
                                        std::to_string(e.size()) + " terms, degree " +
                                        std::to_string(e.total_deg()) + ")");
                return false;
            }
            if (e.is_constant()) {
                b.trace.push_back("contradiction: " + e.str() + " = 0");
                note_certificate(b);
                return false; // inconsistent branch
            }
            kept.push_back(e);
        }
        std::sort(kept.begin(), kept.end(), poly_less);
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        b.eqs = std::move(kept);
        // a side condition that collapsed to zero contradicts the branch
        for (auto& c : b.nonzero)
            if (c.is_zero()) return false;
        return true;
    }

    void note_certificate(const Branch& b) {
        if (b.depth == 0 && !b.trace.empty())
            result_.notes.push_back("inconsistent: " + b.trace.back());
    }

    void process(Branch b) {
        for (;;) {
            if (!simplify(b)) return;
            if (b.eqs.empty()) {
                emit(std::move(b));
                return;
            }
            if (eliminate_linear_constant(b)) continue;
            if (branch_linear(b)) return;
            if (branch_factor(b)) return;
            if (try_groebner(b)) continue;
            result_.complete = false;
            std::ostringstream os;
            os << "unresolved branch with " << b.eqs.size() << " equations: ";
            for (std::size_t i = 0; i < b.eqs.size() && i < 3; ++i)
                os << (i ? "; " : "") << b.eqs[i].str();
            result_.notes.push_back(os.str());
            return;
        }
    }

    bool assumed_nonzero(const Branch& b, Sym s) const {
        for (auto& c : b.nonzero)
            if (c == ParamPoly(s)) return true;
        return false;
    }

    // Coefficient known nonvanishing: a constant, or a single monomial whose
    // symbols are all assumed nonzero.
    bool known_nonzero(const Branch& b, const ParamPoly& c) const {
        if (c.is_zero()) return false;
        if (c.is_constant()) return true;
        if (c.size() != 1) return false;
        for (auto& [s, k] : c.leading_mono())
            if (!assumed_nonzero(b, s)) return false;
        return true;
    }

    bool eliminate_linear_constant(Branch& b) {
        for (Sym x : sys_.unknowns) {
            for (auto& e : b.eqs) {
                if (e.degree(x) != 1) continue;
                auto cs = e.coeffs_in(x);
                if (!known_nonzero(b, cs[1])) continue;
                apply_assignment(b, x, RatFun{-cs[0], cs[1]});
                return true;
            }
        }
        return false;
    }

    bool push_branch(Branch b) {
        if (b.depth > budget_.max_depth) {
            result_.complete = false;
            result_.budget_hit = true;
            result_.notes.push_back("depth budget exhausted; a branch was dropped");
            return false;
        }
        stack_.push_back(std::move(b));
        return true;
    }

    bool branch_linear(Branch& b) {
        // pick the pivot with the simplest leading coefficient
        Sym best_x{};
        std::size_t best_i = 0;
        std::tuple<std::size_t, unsigned, std::size_t> best_score{~0ull, 0, 0};
        bool found = false;
        for (Sym x : sys_.unknowns) {
            for (std::size_t i = 0; i < b.eqs.size(); ++i) {
                const ParamPoly& e = b.eqs[i];
                if (e.degree(x) != 1) continue;
                auto cs = e.coeffs_in(x);
                // substituting through a fat pivot explodes the remaining
                // equations; leave such systems to the groebner fallback
                if (cs[1].size() > 4 || cs[1].total_deg() > 2) continue;
                auto score = std::make_tuple(cs[1].size(), cs[1].total_deg(), e.size());
                if (!found || score < best_score) {
                    found = true;
                    best_score = score;
                    best_x = x;
                    best_i = i;
                }
            }
        }
        if (!found) return false;
        auto cs = b.eqs[best_i].coeffs_in(best_x);
        const ParamPoly& c = cs[1];
        const ParamPoly& d = cs[0];
        // degenerate side: the pivot coefficient vanishes
        Branch zero = b;
        zero.depth += 1;
        zero.eqs.push_back(c);
        zero.eqs.push_back(d);
        zero.eqs.erase(zero.eqs.begin() + static_cast<long>(best_i));
        zero.trace.push_back("assume " + c.str() + " = 0");
        push_branch(std::move(zero));
        // main line: x = -d / c with c != 0; depth counts case splits, the
        // continuation stays on the parent's level
        Branch nz = std::move(b);
        nz.nonzero.push_back(c.normalized());
        nz.trace.push_back("assume " + c.str() + " != 0");
        nz.eqs.erase(nz.eqs.begin() + static_cast<long>(best_i));
        apply_assignment(nz, best_x, RatFun{-d, c});
        push_branch(std::move(nz));
        return true;
    }

    bool branch_factor(Branch& b) {
        // pick the simplest equation with a splittable monomial factor or a
        // univariate constant-coefficient equation
        std::vector<std::size_t> order(b.eqs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            auto ki = std::make_tuple(b.eqs[i].total_deg(), b.eqs[i].size());
            auto kj = std::make_tuple(b.eqs[j].total_deg(), b.eqs[j].size());
            if (ki != kj) return ki < kj;
            return poly_less(b.eqs[i], b.eqs[j]);
        });
        for (std::size_t i : order) {
            Mono content = splittable_content(b.eqs[i], b);
            if (!content.empty()) {
                split_on_content(b, i, content);
                return true;
            }
        }
        for (std::size_t i : order) {
            const ParamPoly& e = b.eqs[i];
            auto syms = e.symbols();
            if (syms.size() != 1) continue;
            Sym x = *syms.begin();
            if (!unknown_set_.count(x)) continue;
            split_univariate(b, i, x);
            return true;
        }
        for (std::size_t i : order)
            if (split_linear_form(b, i)) return true;
        for (std::size_t i : order)
            if (split_quadratic(b, i)) return true;
        for (std::size_t i : order)
            if (split_multilinear(b, i)) return true;
        return false;
    }

    static std::optional<Rational> rational_sqrt(const Rational& c) {
        if (c < Rational(0)) return std::nullopt;
        BigInt n = boost::multiprecision::sqrt(num(c));
        BigInt d = boost::multiprecision::sqrt(den(c));
        if (n * n != num(c) || d * d != den(c)) return std::nullopt;
        return Rational(n) / Rational(d);
    }

    // Exact square root of a polynomial, if it is a perfect square.
    static std::optional<ParamPoly> poly_sqrt(const ParamPoly& p) {
        if (p.is_zero()) return ParamPoly(Rational(0));
        auto lc = rational_sqrt(p.leading_coeff());
        if (!lc) return std::nullopt;
        Mono half;
        for (auto& [s, k] : p.leading_mono()) {
            if (k % 2) return std::nullopt;
            half.emplace_back(s, k / 2);
        }
        ParamPoly root = ParamPoly::term(std::move(half), *lc);
        const Mono head = root.leading_mono();
        const Rational twice = *lc * Rational(2);
        for (std::size_t guard = 0; guard < 4 * p.size() + 8; ++guard) {
            ParamPoly rem = p - root * root;
            if (rem.is_zero()) return root;
            // peel LT(rem) / (2 LT(root)); fail when not divisible
            Mono m;
            auto ih = head.begin();
            bool ok = true;
            for (auto& [s, k] : rem.leading_mono()) {
                unsigned sub = 0;
                while (ih != head.end() && ih->first < s) { ok = false; break; }
                if (!ok) break;
                if (ih != head.end() && ih->first == s) sub = (ih++)->second;
                if (k < sub) { ok = false; break; }
                if (k > sub) m.emplace_back(s, k - sub);
            }
            if (!ok || ih != head.end()) return std::nullopt;
            root += ParamPoly::term(std::move(m), rem.leading_coeff() / twice);
        }
        return std::nullopt;
    }

    // Splits an equation quadratic in one unknown whose discriminant is a
    // perfect square into its two linear-in-x factors.
    bool split_quadratic(Branch& b, std::size_t i) {
        const ParamPoly& e = b.eqs[i];
        if (e.size() > 120) return false;
        for (Sym x : sys_.unknowns) {
            if (e.degree(x) != 2) continue;
            auto cs = e.coeffs_in(x);
            if (!known_nonzero(b, cs[2])) continue;
            ParamPoly disc = cs[1] * cs[1] - cs[2] * cs[0] * Rational(4);
            if (disc.size() > 200) continue;
            auto s = poly_sqrt(disc);
            if (!s) continue;
            ParamPoly two_a = cs[2] * Rational(2);
            if (s->is_zero()) { // double root: the single factor is implied
                b.eqs[i] = (ParamPoly(x) * two_a + cs[1]).normalized();
                stack_.push_back(std::move(b));
                return true;
            }
            ParamPoly f1 = (ParamPoly(x) * two_a + cs[1] - *s).normalized();
            ParamPoly f2 = (ParamPoly(x) * two_a + cs[1] + *s).normalized();
            Branch zero = b;
            zero.depth += 1;
            zero.eqs[i] = f1;
            zero.trace.push_back("assume " + f1.str() + " = 0");
            push_branch(std::move(zero));
            Branch nz = std::move(b);
            nz.nonzero.push_back(f1);
            nz.eqs[i] = f2;
            nz.trace.push_back("assume " + f1.str() + " != 0");
            push_branch(std::move(nz));
            return true;
        }
        return false;
    }

    static ParamPoly top_component(const ParamPoly& e) {
        unsigned d = e.total_deg();
        ParamPoly t;
        for (auto& [m, c] : e.terms()) {
            unsigned td = 0;
            for (auto& [s, k] : m) td += k;
            if (td == d) t += ParamPoly::term(Mono(m), c);
        }
        return t;
    }

    // Peels one linear-form factor L = sum c_i x_i + c_0 (small integer c_i,
    // rational c_0) off an equation and branches on L = 0 | L != 0.  Coupled
    // coefficient systems routinely produce products of such forms that no
    // other split recognizes.
    bool split_multilinear(Branch& b, std::size_t i) {
        const ParamPoly& e = b.eqs[i];
        if (e.size() > 120 || e.total_deg() > 12 || e.total_deg() < 2) return false;
        std::vector<Sym> vars;
        for (Sym s : e.symbols()) {
            if (!unknown_set_.count(s)) return false;
            vars.push_back(s);
        }
        std::size_t n = vars.size();
        if (n < 2 || n > 4) return false;
        std::vector<int> cand(n, -2);
        for (;;) {
            if (try_peel_linear(b, i, vars, cand)) return true;
            std::size_t k = 0;
            while (k < n && cand[k] == 2) cand[k++] = -2;
            if (k == n) break;
            ++cand[k];
        }
        return false;
    }

    bool try_peel_linear(Branch& b, std::size_t i, const std::vector<Sym>& vars,
                         const std::vector<int>& cand) {
        std::size_t n = vars.size();
        // normalization: some coefficient nonzero, the first one positive,
        // and the tuple primitive
        std::size_t p = n;
        int g = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (cand[k]) {
                if (p == n) p = k;
                g = std::gcd(g, std::abs(cand[k]));
            }
        if (p == n || cand[p] < 0 || g != 1) return false;
        const ParamPoly& e = b.eqs[i];
        Rational h(cand[p]);
        ParamPoly q; // the homogeneous zero set: x_p = q
        for (std::size_t k = 0; k < n; ++k)
            if (k != p && cand[k]) q += ParamPoly(vars[k]) * (Rational(-cand[k]) / h);
        if (!top_component(e).substitute(vars[p], q).is_zero()) return false;
        // shift coordinates: with x_p = q + t the factor becomes h*t + c_0,
        // so admissible c_0 = -h*r for roots r of the shifted polynomial
        auto es = e.coeffs_in(vars[p]);
        std::size_t d = es.size() - 1;
        std::vector<ParamPoly> shifted(d + 1); // coefficients in t
        {
            std::vector<Rational> binom(d + 1, Rational(0));
            binom[0] = Rational(1);
            std::vector<ParamPoly> qpow(d + 1);
            qpow[0] = ParamPoly(Rational(1));
            for (std::size_t k = 1; k <= d; ++k) qpow[k] = qpow[k - 1] * q;
            for (std::size_t k = 0; k <= d; ++k) {
                Rational c(1);
                for (std::size_t j = 0; j <= k; ++j) {
                    shifted[j] += es[k] * qpow[k - j] * c;
                    c = c * Rational(static_cast<long>(k - j)) /
                        Rational(static_cast<long>(j + 1));
                }
            }
        }
        // candidate roots from any one monomial's univariate trace
        ParamPoly probe;
        for (std::size_t j = 0; j <= d && probe.is_zero(); ++j) {
            if (shifted[j].is_zero()) continue;
            const Mono& m0 = shifted[j].leading_mono();
            for (std::size_t k = 0; k <= d; ++k)
                for (auto& [m, c] : shifted[k].terms())
                    if (m == m0)
                        probe += k ? ParamPoly::term({{vars[p], static_cast<unsigned>(k)}}, c)
                                   : ParamPoly(c);
        }
        if (probe.is_zero()) return false;
        auto rr = rational_roots(probe, vars[p]);
        std::vector<Rational> distinct;
        for (auto& r : rr.roots)
            if (std::find(distinct.begin(), distinct.end(), r) == distinct.end())
                distinct.push_back(r);
        std::sort(distinct.begin(), distinct.end());
        for (auto& r : distinct) {
            ParamPoly value; // sum shifted[j] * r^j must vanish identically
            Rational rp(1);
            for (std::size_t j = 0; j <= d; ++j) {
                value += shifted[j] * rp;
                rp = rp * r;
            }
            if (!value.is_zero()) continue;
            ParamPoly lin = ParamPoly(vars[p]) * h - q * h + ParamPoly(-h * r);
            // exact synthetic division of e by lin in x_p
            ParamPoly dcoef = lin - ParamPoly(vars[p]) * h;
            std::vector<ParamPoly> rem = es;
            std::vector<ParamPoly> quo(d);
            bool exact = true;
            for (std::size_t k = d; k >= 1; --k) {
                ParamPoly qk = rem[k] * (Rational(1) / h);
                quo[k - 1] = qk;
                rem[k - 1] -= qk * dcoef;
            }
            if (!rem[0].is_zero()) exact = false;
            if (!exact) continue;
            ParamPoly rest;
            for (std::size_t k = 0; k < d; ++k)
                rest += quo[k] * ParamPoly(vars[p]).pow(static_cast<unsigned>(k));
            ParamPoly L = lin.normalized();
            Branch zero = b;
            zero.depth += 1;
            zero.eqs[i] = L;
            zero.trace.push_back("assume " + L.str() + " = 0");
            push_branch(std::move(zero));
            Branch nz = std::move(b);
            nz.nonzero.push_back(L);
            nz.eqs[i] = rest;
            nz.trace.push_back("assume " + L.str() + " != 0");
            push_branch(std::move(nz));
            return true;
        }
        return false;
    }

    // Detects a bivariate equation that is univariate in the linear form
    // L = x + c*y (p_y = c * p_x identically) and branches on L's rational
    // roots.
    bool split_linear_form(Branch& b, std::size_t i) {
        const ParamPoly& e = b.eqs[i];
        auto syms = e.symbols();
        if (syms.size() != 2) return false;
        Sym x = *syms.begin();
        Sym y = *std::next(syms.begin());
        if (!unknown_set_.count(x) || !unknown_set_.count(y)) return false;
        ParamPoly px = e.derivative(x), py = e.derivative(y);
        if (px.is_zero() || py.is_zero()) return false;
        Rational c = py.leading_coeff() / px.leading_coeff();
        if (!(py == px * c)) return false;
        // candidate q from the y = 0 section; confirm e == q(x + c y)
        ParamPoly lform = ParamPoly(x) + ParamPoly(y) * c;
        ParamPoly section = e.substitute(y, ParamPoly(Rational(0)));
        auto cs = section.coeffs_in(x);
        ParamPoly rebuilt;
        for (std::size_t k = 0; k < cs.size(); ++k) {
            if (!cs[k].is_constant()) return false;
            rebuilt += lform.pow(static_cast<unsigned>(k)) * cs[k].constant_value();
        }
        if (!(rebuilt == e)) return false;

        Branch base = b;
        base.eqs.erase(base.eqs.begin() + static_cast<long>(i));
        auto rr = rational_roots(section, x);
        std::vector<Rational> distinct;
        for (auto& r : rr.roots)
            if (std::find(distinct.begin(), distinct.end(), r) == distinct.end())
                distinct.push_back(r);
        std::sort(distinct.begin(), distinct.end());
        for (auto& r : distinct) {
            Branch child = base;
            child.depth += 1;
            child.trace.push_back(x.name() + " = " + to_string(r) + " - (" + to_string(c) +
                                  ")*" + y.name());
            apply_assignment(child, x,
                             RatFun::from(ParamPoly(r) - ParamPoly(y) * c));
            push_branch(std::move(child));
        }
        unsigned rem = rr.remaining_degree & 0x7fffffffu;
        bool exhaustive = (rr.remaining_degree & 0x80000000u) == 0;
        if (rem > 0) {
            if (exhaustive) {
                result_.notes.push_back("no rational root: " + e.str() +
                                        " = 0 has a degree-" + std::to_string(rem) +
                                        " factor without rational roots in " + x.name() +
                                        " + (" + to_string(c) + ")*" + y.name());
            } else {
                result_.complete = false;
                result_.notes.push_back("root search not exhaustive for " + e.str());
            }
        }
        return true;
    }

    void split_on_content(Branch& b, std::size_t i, const Mono& content) {
        // eq = prod s_j^{k_j} * rest: branch s_1 = 0 | s_1 != 0, s_2 = 0 | ...
        // | all nonzero and rest = 0
        Branch cur = b;
        cur.eqs.erase(cur.eqs.begin() + static_cast<long>(i));
        for (auto& [s, k] : content) {
            Branch zero = cur;
            zero.depth += 1;
            zero.trace.push_back("assume " + s.name() + " = 0");
            apply_assignment(zero, s, RatFun::from(ParamPoly(Rational(0))));
            push_branch(std::move(zero));
            cur.nonzero.push_back(ParamPoly(s));
            cur.trace.push_back("assume " + s.name() + " != 0");
        }
        ParamPoly rest = mono_divide(b.eqs[i], content);
        cur.eqs.push_back(rest);
        push_branch(std::move(cur));
    }

    void split_univariate(Branch& b, std::size_t i, Sym x) {
        ParamPoly e = b.eqs[i];
        Branch base = b;
        base.eqs.erase(base.eqs.begin() + static_cast<long>(i));
        auto rr = rational_roots(e, x);
        std::vector<Rational> distinct;
        for (auto& r : rr.roots)
            if (std::find(distinct.begin(), distinct.end(), r) == distinct.end())
                distinct.push_back(r);
        std::sort(distinct.begin(), distinct.end());
        for (auto& r : distinct) {
            Branch child = base;
            child.depth += 1;
            child.trace.push_back(x.name() + " = " + to_string(r));
            apply_assignment(child, x, RatFun::from(ParamPoly(r)));
            push_branch(std::move(child));
        }
        unsigned rem = rr.remaining_degree & 0x7fffffffu;
        bool exhaustive = (rr.remaining_degree & 0x80000000u) == 0;
        if (rem > 0) {
            if (exhaustive) {
                result_.notes.push_back("no rational root: " + e.str() +
                                        " = 0 has a degree-" + std::to_string(rem) +
                                        " factor without rational roots");
            } else {
                result_.complete = false;
                result_.notes.push_back("root search not exhaustive for " + e.str());
            }
        }
    }

    bool try_groebner(Branch& b) {
        std::set<Sym> present;
        for (auto& e : b.eqs)
            for (Sym s : e.symbols()) present.insert(s);
        for (Sym s : present)
            if (!unknown_set_.count(s)) return false;
        if (present.size() > 6) return false;
        for (auto& e : b.eqs)
            if (e.total_deg() > 10 || e.size() > 80) return false;
        std::string sig;
        for (auto& e : b.eqs) sig += e.str() + ";";
        if (!b.gb_seen.insert(sig).second) return false;
        std::vector<Sym> vars;
        for (Sym s : sys_.unknowns)
            if (present.count(s)) vars.push_back(s);
        std::vector<ParamPoly> gb;
        try {
            auto t0 = std::chrono::steady_clock::now();
            gb = groebner_lex(b.eqs, vars);
            if (trace_)
                fprintf(stderr, "[solve] groebner ok in %.2fs (%zu eqs, %zu vars)\n",
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count(),
                        b.eqs.size(), vars.size());
        } catch (const std::exception& ex) {
            if (trace_) fprintf(stderr, "[solve] groebner failed: %s\n", ex.what());
            result_.notes.push_back(std::string("groebner fallback failed: ") + ex.what());
            return false;
        }
        // normalize like simplify() so a fixed point is recognized
        for (auto& e : gb) e = e.normalized();
        std::sort(gb.begin(), gb.end(), poly_less);
        gb.erase(std::unique(gb.begin(), gb.end()), gb.end());
        if (gb == b.eqs) return false;
        b.eqs = std::move(gb);
        b.trace.push_back("groebner basis");
        return true;
    }

    void emit(Branch b) {
        // side conditions must not have collapsed
        for (auto& c : b.nonzero)
            if (c.is_zero()) return;
        for (auto& [x, v] : b.assign)
            if (v.den.is_zero()) return;
        // soundness: every original equation vanishes identically
        for (auto& e : sys_.equations) {
            RatFun r = ratfun_eval(e, b.assign);
            if (!r.num.is_zero()) {
                result_.notes.push_back("dropped unsound branch (resubstitution failed)");
                result_.complete = false;
                return;
            }
        }
        SolutionFamily f;
        f.assignment = std::move(b.assign);
        for (Sym x : sys_.unknowns)
            if (!f.assignment.count(x)) f.free_syms.insert(x);
        for (auto& [x, v] : f.assignment) {
            for (Sym s : v.num.symbols()) f.free_syms.insert(s);
            for (Sym s : v.den.symbols()) f.free_syms.insert(s);
        }
        for (auto& c : b.nonzero)
            if (c.size() == 1) { // x^2 != 0 is just x != 0
                Mono m = c.leading_mono();
                for (auto& [s, k] : m) k = 1;
                c = ParamPoly::term(std::move(m), Rational(1));
            }
        std::sort(b.nonzero.begin(), b.nonzero.end(), poly_less);
        b.nonzero.erase(std::unique(b.nonzero.begin(), b.nonzero.end()), b.nonzero.end());
        for (auto& c : b.nonzero)
            if (!c.is_constant()) f.side_conditions.push_back(c);
        f.provenance = std::move(b.trace);
        families_.push_back(std::move(f));
    }

    void finalize() {
        auto key = [this](const SolutionFamily& f) {
            std::ostringstream os;
            for (Sym x : sys_.unknowns) {
                auto it = f.assignment.find(x);
                os << x.name() << "=" << (it == f.assignment.end() ? "*" : it->second.str())
                   << ";";
            }
            return os.str();
        };
        std::stable_sort(families_.begin(), families_.end(),
                         [&](const SolutionFamily& a, const SolutionFamily& b) {
                             return key(a) < key(b);
                         });
        std::vector<SolutionFamily> out;
        std::string last;
        for (auto& f : families_) {
            std::string k = key(f);
            if (k == last) continue;
            last = k;
            out.push_back(std::move(f));
        }
        result_.families = std::move(out);
    }

    const AlgSystem& sys_;
    SolveBudget budget_;
    std::set<Sym> unknown_set_;
    std::deque<Branch> stack_;
    std::vector<SolutionFamily> families_;
    SolveResult result_;
    unsigned processed_ = 0;
    bool trace_ = false;
};

} // namespace

SolveResult solve_system(const AlgSystem& s, const SolveBudget& budget) {
    return Solver(s, budget).run();
}

} // namespace fex
