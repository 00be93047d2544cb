#include "fexpand/parampoly.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fex {

std::optional<Rational> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt n(s.substr(0, slash));
        BigInt d(s.substr(slash + 1));
        if (d == 0) return std::nullopt;
        return Rational(n, d);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

unsigned total_degree(const Mono& m) {
    unsigned d = 0;
    for (auto& [s, e] : m) d += e;
    return d;
}

bool mono_less(const Mono& a, const Mono& b) {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    // lex by symbol creation order: larger power on an earlier symbol wins
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first != ib->first)
            // the one owning the earlier symbol is larger
            return ia->first.id > ib->first.id;
        if (ia->second != ib->second) return ia->second < ib->second;
        ++ia, ++ib;
    }
    return ia == a.end() && ib != b.end();
}

ParamPoly::ParamPoly(Rational c) {
    if (c != 0) terms_.emplace(Mono{}, std::move(c));
}

ParamPoly::ParamPoly(Sym s, unsigned exp) {
    if (exp == 0)
        terms_.emplace(Mono{}, Rational(1));
    else
        terms_.emplace(Mono{{s, exp}}, Rational(1));
}

ParamPoly ParamPoly::term(Mono m, Rational c) {
    ParamPoly p;
    if (c != 0) p.terms_.emplace(std::move(m), std::move(c));
    return p;
}

bool ParamPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational ParamPoly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant poly");
    return terms_.begin()->second;
}

void ParamPoly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = (it->second == 0) ? terms_.erase(it) : std::next(it);
}

ParamPoly ParamPoly::operator-() const {
    ParamPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
    for (auto& [m, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
    for (auto& [m, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(m, -c);
        if (!fresh) {
            it->second -= c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

ParamPoly ParamPoly::operator+(const ParamPoly& o) const {
    ParamPoly r = *this;
    r += o;
    return r;
}

ParamPoly ParamPoly::operator-(const ParamPoly& o) const {
    ParamPoly r = *this;
    r -= o;
    return r;
}

namespace {
Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r;
    r.reserve(a.size() + b.size());
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first))
            r.push_back(*ia++);
        else if (ia == a.end() || ib->first < ia->first)
            r.push_back(*ib++);
        else {
            r.emplace_back(ia->first, ia->second + ib->second);
            ++ia, ++ib;
        }
    }
    return r;
}
} // namespace

ParamPoly ParamPoly::operator*(const ParamPoly& o) const {
    ParamPoly r;
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) {
            Rational c = ca * cb;
            auto [it, fresh] = r.terms_.emplace(mono_mul(ma, mb), c);
            if (!fresh) it->second += c;
        }
    r.prune();
    return r;
}

ParamPoly ParamPoly::operator*(const Rational& c) const {
    if (c == 0) return ParamPoly();
    ParamPoly r = *this;
    for (auto& [m, v] : r.terms_) v *= c;
    return r;
}

ParamPoly ParamPoly::pow(unsigned e) const {
    ParamPoly r(Rational(1));
    ParamPoly base = *this;
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

const Mono& ParamPoly::leading_mono() const {
    if (terms_.empty()) throw std::logic_error("leading_mono of zero");
    return terms_.rbegin()->first;
}

const Rational& ParamPoly::leading_coeff() const {
    if (terms_.empty()) throw std::logic_error("leading_coeff of zero");
    return terms_.rbegin()->second;
}

unsigned ParamPoly::degree(Sym s) const {
    unsigned d = 0;
    for (auto& [m, c] : terms_)
        for (auto& [ms, e] : m)
            if (ms == s) d = std::max(d, e);
    return d;
}

unsigned ParamPoly::total_deg() const {
    unsigned d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
}

bool ParamPoly::depends_on(Sym s) const {
    for (auto& [m, c] : terms_)
        for (auto& [ms, e] : m)
            if (ms == s) return true;
    return false;
}

std::set<Sym> ParamPoly::symbols() const {
    std::set<Sym> r;
    for (auto& [m, c] : terms_)
        for (auto& [s, e] : m) r.insert(s);
    return r;
}

std::vector<ParamPoly> ParamPoly::coeffs_in(Sym s) const {
    std::vector<ParamPoly> out(degree(s) + 1);
    for (auto& [m, c] : terms_) {
        unsigned e = 0;
        Mono rest;
        for (auto& [ms, me] : m)
            if (ms == s)
                e = me;
            else
                rest.push_back({ms, me});
        out[e] += ParamPoly::term(std::move(rest), c);
    }
    return out;
}

ParamPoly ParamPoly::derivative(Sym s) const {
    ParamPoly r;
    for (auto& [m, c] : terms_)
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i].first == s) {
                Mono d = m;
                Rational nc = c * Rational(m[i].second);
                if (d[i].second == 1)
                    d.erase(d.begin() + static_cast<long>(i));
                else
                    d[i].second -= 1;
                r += ParamPoly::term(std::move(d), std::move(nc));
            }
    return r;
}

ParamPoly ParamPoly::substitute(Sym s, const ParamPoly& value) const {
    ParamPoly r;
    for (auto& [m, c] : terms_) {
        unsigned e = 0;
        Mono rest;
        for (auto& [ms, me] : m)
            if (ms == s)
                e = me;
            else
                rest.push_back({ms, me});
        ParamPoly t = ParamPoly::term(std::move(rest), c);
        if (e) t = t * value.pow(e);
        r += t;
    }
    return r;
}

ParamPoly ParamPoly::reduce_square(Sym s, const ParamPoly& square_value) const {
    ParamPoly r;
    for (auto& [m, c] : terms_) {
        unsigned e = 0;
        Mono rest;
        for (auto& [ms, me] : m)
            if (ms == s)
                e = me;
            else
                rest.push_back({ms, me});
        ParamPoly t = ParamPoly::term(std::move(rest), c);
        if (e >= 2) t = t * square_value.pow(e / 2);
        if (e % 2) t = t * ParamPoly(s);
        r += t;
    }
    return r;
}

Rational ParamPoly::content() const {
    BigInt gn = 0, gl = 1;
    bool first = true;
    for (auto& [m, c] : terms_) {
        gn = boost::multiprecision::gcd(gn, num(c));
        gl = first ? den(c) : boost::multiprecision::lcm(gl, den(c));
        first = false;
    }
    if (first) return Rational(0);
    return Rational(gn, gl);
}

ParamPoly ParamPoly::normalized() const {
    if (terms_.empty()) return *this;
    Rational c = content();
    if (leading_coeff() < 0) c = -c;
    ParamPoly r = *this;
    for (auto& [m, v] : r.terms_) v /= c;
    return r;
}

Rational ParamPoly::eval(const std::map<Sym, Rational>& vals) const {
    Rational acc(0);
    for (auto& [m, c] : terms_) {
        Rational t = c;
        for (auto& [s, e] : m) {
            auto it = vals.find(s);
            if (it == vals.end()) throw std::invalid_argument("eval: missing value for " + s.name());
            Rational p(1);
            for (unsigned i = 0; i < e; ++i) p *= it->second;
            t *= p;
        }
        acc += t;
    }
    return acc;
}

double ParamPoly::eval_double(const std::map<Sym, double>& vals) const {
    double acc = 0;
    for (auto& [m, c] : terms_) {
        double t = to_double(c);
        for (auto& [s, e] : m) {
            auto it = vals.find(s);
            if (it == vals.end()) throw std::invalid_argument("eval_double: missing value for " + s.name());
            t *= std::pow(it->second, static_cast<int>(e));
        }
        acc += t;
    }
    return acc;
}

std::string ParamPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print leading terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational ac = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool need_coeff = (ac != 1) || m.empty();
        if (need_coeff) os << to_string(ac);
        bool sep = need_coeff;
        for (auto& [s, e] : m) {
            if (sep) os << "*";
            os << s.name();
            if (e > 1) os << "^" << e;
            sep = true;
        }
    }
    return os.str();
}

ParamPoly RatFun::as_poly() const {
    if (!is_poly()) throw std::logic_error("RatFun is not polynomial");
    Rational d = den.constant_value();
    return num * Rational(1 / d);
}

std::string RatFun::str() const {
    if (is_poly()) return as_poly().str();
    return "(" + num.str() + ")/(" + den.str() + ")";
}

} // namespace fex
