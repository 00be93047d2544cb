#include "fexpand/auxreg.hpp"

#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace fex {

namespace {

LaurentForm partial(const LaurentForm& f, std::size_t j) {
    LaurentForm r(f.kernels());
    for (auto& [k, c] : f.terms()) {
        if (k.exps[j] == 0) continue;
        LKey d = k;
        Rational e(d.exps[j]);
        d.exps[j] -= 1;
        r.add_term(std::move(d), c * e);
    }
    return r;
}

} // namespace

const std::vector<std::string>& AuxSystem::builtin_names() {
    static const std::vector<std::string> names = {
        "tanh",        "tan",     "exp",     "gprime-over-g", "sinh-cosh",
        "sin-cos",     "hprime-invh", "riccati", "jacobi-sn-cn-dn"};
    return names;
}

AuxSystem AuxSystem::builtin(const std::string& name,
                             const std::map<std::string, Rational>& params) {
    AuxSystem a;
    a.name_ = name;

    auto resolve = [&](const std::string& declared, const std::string& symname,
                       bool nonzero) -> ParamPoly {
        auto it = params.find(declared);
        ParamPoly p;
        if (it != params.end()) {
            if (nonzero && it->second == 0)
                throw std::invalid_argument(name + ": parameter " + declared +
                                            " must be nonzero");
            p = ParamPoly(it->second);
        } else {
            Sym s = symtab::intern(symname, SymKind::Modulus);
            a.modulus_syms_.push_back(s);
            p = ParamPoly(s);
        }
        a.params_.emplace(declared, p);
        return p;
    };

    auto intern_kernels = [&](std::vector<std::string> names) {
        for (auto& n : names) a.kernels_.push_back(symtab::intern(n, SymKind::Kernel));
    };

    auto kp = [&](std::size_t i, int e) {
        return LaurentForm::kernel_power(a.kernels_, i, e);
    };
    auto cf = [&](ParamPoly p) { return LaurentForm::constant(a.kernels_, std::move(p)); };

    if (name == "tanh") {
        intern_kernels({"F"});
        a.rules_ = {{false, cf(ParamPoly(Rational(1))) - kp(0, 2)}};
    } else if (name == "tan") {
        intern_kernels({"F"});
        a.rules_ = {{false, cf(ParamPoly(Rational(1))) + kp(0, 2)}};
    } else if (name == "exp") {
        intern_kernels({"F"});
        a.rules_ = {{false, kp(0, 1)}};
    } else if (name == "gprime-over-g") {
        intern_kernels({"F"});
        ParamPoly alpha = resolve("alpha", "aux_alpha", false);
        ParamPoly beta = resolve("beta", "aux_beta", false);
        a.rules_ = {{false, cf(beta) + kp(0, 1) * alpha - kp(0, 2)}};
    } else if (name == "sinh-cosh") {
        intern_kernels({"F", "G"}); // F = cosh, G = sinh
        a.rules_ = {{false, kp(1, 1)}, {false, kp(0, 1)}};
        a.identities_ = {{1, kp(0, 2) - cf(ParamPoly(Rational(1)))}};
    } else if (name == "sin-cos") {
        intern_kernels({"F", "G"}); // F = sin, G = cos
        a.rules_ = {{false, kp(1, 1)}, {false, -kp(0, 1)}};
        a.identities_ = {{1, cf(ParamPoly(Rational(1))) - kp(0, 2)}};
    } else if (name == "hprime-invh") {
        intern_kernels({"F", "G"}); // F = H'/H, G = 1/H
        ParamPoly lambda = resolve("lambda", "aux_lambda", false);
        ParamPoly mu = resolve("mu", "aux_mu", false);
        a.rules_ = {{false, cf(-lambda) + kp(1, 1) * mu - kp(0, 2)},
                    {false, (kp(0, 1) * kp(1, 1)) * Rational(-1)}};
    } else if (name == "riccati") {
        intern_kernels({"F", "G"});
        ParamPoly alpha = resolve("alpha", "aux_alpha", true);
        ParamPoly beta = resolve("beta", "aux_beta", true);
        ParamPoly mu = resolve("mu", "aux_mu", true);
        a.rules_ = {{false, (kp(0, 1) * kp(1, 1)) * alpha},
                    {false, cf(mu) + kp(1, 2) * (alpha * alpha) - kp(0, 1) * beta}};
    } else if (name == "jacobi-sn-cn-dn") {
        intern_kernels({"sn", "cn", "dn"});
        ParamPoly k = resolve("k", "k", false);
        ParamPoly k2 = k * k;
        a.rules_ = {{false, kp(1, 1) * kp(2, 1)},
                    {false, (kp(0, 1) * kp(2, 1)) * Rational(-1)},
                    {false, (kp(0, 1) * kp(1, 1)) * (-k2)}};
        a.identities_ = {{1, cf(ParamPoly(Rational(1))) - kp(0, 2)},
                         {2, cf(ParamPoly(Rational(1))) - kp(0, 2) * k2}};
    } else {
        throw std::invalid_argument("unknown auxiliary system: " + name);
    }
    return a;
}

AuxSystem AuxSystem::custom(std::string name, std::vector<Sym> kernels,
                            std::vector<AuxRule> rules, std::vector<AuxIdentity> identities,
                            std::vector<Sym> modulus) {
    if (kernels.size() != rules.size())
        throw std::invalid_argument("one rule per kernel required");
    AuxSystem a;
    a.name_ = std::move(name);
    a.kernels_ = std::move(kernels);
    a.rules_ = std::move(rules);
    a.identities_ = std::move(identities);
    a.modulus_syms_ = std::move(modulus);
    return a;
}

const ParamPoly& AuxSystem::param(const std::string& declared) const {
    auto it = params_.find(declared);
    if (it == params_.end())
        throw std::invalid_argument(name_ + " has no parameter " + declared);
    return it->second;
}

std::size_t AuxSystem::kernel_index(Sym k) const {
    for (std::size_t i = 0; i < kernels_.size(); ++i)
        if (kernels_[i] == k) return i;
    throw std::invalid_argument(k.name() + " is not a kernel of " + name_);
}

LaurentForm AuxSystem::apply_rules(const LaurentForm& f) const {
    LaurentForm r(kernels_);
    for (auto& [k, c] : f.terms()) {
        unsigned expl = 0;
        for (std::size_t i = 0; i < kernels_.size(); ++i)
            if ((k.markers & (1u << i)) && !rules_[i].quadratic) expl |= 1u << i;
        LaurentForm t(kernels_);
        t.add_term(LKey{k.exps, k.markers & ~expl}, c);
        for (std::size_t i = 0; i < kernels_.size(); ++i)
            if (expl & (1u << i)) t = t * rules_[i].rhs;
        r += t;
    }
    return r;
}

LaurentForm AuxSystem::mul(const LaurentForm& a, const LaurentForm& b) const {
    LaurentForm a2 = apply_rules(a), b2 = apply_rules(b);
    LaurentForm r(kernels_);
    for (auto& [ka, ca] : a2.terms())
        for (auto& [kb, cb] : b2.terms()) {
            unsigned common = ka.markers & kb.markers;
            LKey k{ka.exps, ka.markers ^ kb.markers};
            for (std::size_t i = 0; i < k.exps.size(); ++i) k.exps[i] += kb.exps[i];
            LaurentForm t(kernels_);
            t.add_term(std::move(k), ca * cb);
            for (std::size_t i = 0; i < kernels_.size(); ++i)
                if (common & (1u << i)) t = t * rules_[i].rhs;
            r += t;
        }
    return r;
}

LaurentForm AuxSystem::pow(const LaurentForm& a, unsigned e) const {
    LaurentForm r = LaurentForm::constant(kernels_, ParamPoly(Rational(1)));
    LaurentForm base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

LaurentForm AuxSystem::derivative(const LaurentForm& f) const {
    LaurentForm g = apply_rules(f);
    LaurentForm r(kernels_);
    for (auto& [k, c] : g.terms()) {
        for (std::size_t i = 0; i < kernels_.size(); ++i) {
            if (k.exps[i] == 0) continue;
            LKey d = k;
            Rational e(d.exps[i]);
            d.exps[i] -= 1;
            LaurentForm t(kernels_);
            t.add_term(std::move(d), c * e);
            LaurentForm d1 = rules_[i].quadratic ? LaurentForm::marker(kernels_, i)
                                                 : rules_[i].rhs;
            r += mul(t, d1);
        }
        for (std::size_t j = 0; j < kernels_.size(); ++j) {
            if (!(k.markers & (1u << j))) continue;
            // markers of explicit kernels were removed by apply_rules
            LKey rest{k.exps, k.markers & ~(1u << j)};
            LaurentForm t(kernels_);
            t.add_term(std::move(rest), c);
            // (marker_j)^2 = R_j with R_j in kernel j only, so
            // d(marker_j) = R_j'(F_j) / 2.
            r += mul(t, partial(rules_[j].rhs, j) * Rational(1, 2));
        }
    }
    return r;
}

LaurentForm AuxSystem::dkernel(std::size_t i, int k) const {
    if (k < 1) throw std::invalid_argument("dkernel order must be >= 1");
    {
        std::shared_lock lock(memo_->mutex);
        auto it = memo_->dk.find({i, k});
        if (it != memo_->dk.end()) return it->second;
    }
    LaurentForm r;
    if (k == 1)
        r = rules_.at(i).quadratic ? LaurentForm::marker(kernels_, i) : rules_.at(i).rhs;
    else
        r = derivative(dkernel(i, k - 1));
    std::unique_lock lock(memo_->mutex);
    memo_->dk.emplace(std::make_pair(i, k), r);
    return r;
}

AuxSystem::Canonical AuxSystem::canonicalize(const LaurentForm& f) const {
    LaurentForm g = apply_rules(f);
    std::vector<unsigned> cleared(kernels_.size(), 0);
    if (!identities_.empty() && !g.empty()) {
        auto [lo, hi] = g.exponent_range();
        for (auto& id : identities_) {
            if (lo[id.eliminable] < 0) {
                cleared[id.eliminable] = static_cast<unsigned>(-lo[id.eliminable]);
                g = g * LaurentForm::kernel_power(kernels_, id.eliminable,
                                                  -lo[id.eliminable]);
            }
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& id : identities_) {
                LaurentForm next(kernels_);
                for (auto& [k, c] : g.terms()) {
                    int e = k.exps[id.eliminable];
                    if (e < 2) {
                        next.add_term(k, c);
                        continue;
                    }
                    changed = true;
                    LKey d = k;
                    d.exps[id.eliminable] = e % 2;
                    LaurentForm t(kernels_);
                    t.add_term(std::move(d), c);
                    next += t * id.square_value.pow(e / 2);
                }
                g = std::move(next);
            }
        }
    }
    return {std::move(g), std::move(cleared)};
}

bool AuxSystem::is_zero(const LaurentForm& f) const { return canonicalize(f).form.empty(); }

Realization AuxSystem::realization() const {
    Realization r;
    auto single = [&](const std::string& gname, const LaurentForm& rule_in_gen) {
        r.generator = symtab::intern(gname, SymKind::Kernel);
        r.generator_rule = rule_in_gen;
    };
    std::vector<Sym> gen;
    if (name_ == "tanh" || name_ == "tan" || name_ == "exp" || name_ == "gprime-over-g") {
        if (name_ == "gprime-over-g") {
            single(kernels_[0].name(), rules_[0].rhs);
            r.images[kernels_[0]] = LaurentForm::kernel_power(kernels_, 0, 1);
            return r;
        }
        Sym g = symtab::intern(name_ == "exp" ? "E" : "T", SymKind::Kernel);
        gen = {g};
        LaurentForm one = LaurentForm::constant(gen, ParamPoly(Rational(1)));
        LaurentForm G1 = LaurentForm::kernel_power(gen, 0, 1);
        LaurentForm G2 = LaurentForm::kernel_power(gen, 0, 2);
        r.generator = g;
        if (name_ == "tanh")
            r.generator_rule = one - G2;
        else if (name_ == "tan")
            r.generator_rule = one + G2;
        else
            r.generator_rule = G1;
        r.images[kernels_[0]] = G1;
        return r;
    }
    if (name_ == "sinh-cosh") {
        Sym g = symtab::intern("E", SymKind::Kernel);
        gen = {g};
        r.generator = g;
        r.generator_rule = LaurentForm::kernel_power(gen, 0, 1);
        LaurentForm p = LaurentForm::kernel_power(gen, 0, 1) * Rational(1, 2);
        LaurentForm m = LaurentForm::kernel_power(gen, 0, -1) * Rational(1, 2);
        r.images[kernels_[0]] = p + m; // cosh
        r.images[kernels_[1]] = p - m; // sinh
        return r;
    }
    r.identity = true;
    for (std::size_t i = 0; i < kernels_.size(); ++i)
        r.images[kernels_[i]] = LaurentForm::kernel_power(kernels_, i, 1);
    return r;
}

bool AuxSystem::numeric_supported() const { return name_ != "riccati"; }

std::vector<double> AuxSystem::eval_kernels(double xi,
                                            const std::map<Sym, double>& vals) const {
    auto pv = [&](const std::string& declared) {
        return params_.at(declared).eval_double(vals);
    };
    if (name_ == "tanh") return {std::tanh(xi)};
    if (name_ == "tan") return {std::tan(xi)};
    if (name_ == "exp") return {std::exp(xi)};
    if (name_ == "gprime-over-g") {
        double al = pv("alpha"), be = pv("beta");
        double disc = be + al * al / 4;
        if (disc <= 0)
            throw std::domain_error("gprime-over-g numeric evaluation needs beta + alpha^2/4 > 0");
        double d = std::sqrt(disc);
        return {al / 2 + d * std::tanh(d * xi)};
    }
    if (name_ == "sinh-cosh") return {std::cosh(xi), std::sinh(xi)};
    if (name_ == "sin-cos") return {std::sin(xi), std::cos(xi)};
    if (name_ == "hprime-invh") {
        double la = pv("lambda"), mu = pv("mu");
        if (la <= 0)
            throw std::domain_error("hprime-invh numeric evaluation needs lambda > 0");
        double s = std::sqrt(la);
        double h = mu / la + std::cos(s * xi);
        return {-s * std::sin(s * xi) / h, 1 / h};
    }
    if (name_ == "jacobi-sn-cn-dn") {
        double k = pv("k");
        double cn = 0, dn = 0;
        double sn = boost::math::jacobi_elliptic(k, xi, &cn, &dn);
        return {sn, cn, dn};
    }
    throw std::domain_error(name_ + " has no numeric evaluator");
}

LaurentForm eval_aux(const Expr& e, const AuxSystem& aux) {
    const auto& K = aux.kernels();
    switch (e->kind) {
    case ExprKind::Const:
        return LaurentForm::constant(K, ParamPoly(e->value));
    case ExprKind::SymRef:
        if (e->sym.kind() == SymKind::Kernel)
            return LaurentForm::kernel_power(K, aux.kernel_index(e->sym), 1);
        return LaurentForm::constant(K, ParamPoly(e->sym));
    case ExprKind::Sum: {
        LaurentForm r(K);
        for (auto& k : e->kids) r += eval_aux(k, aux);
        return r;
    }
    case ExprKind::Prod: {
        LaurentForm r = LaurentForm::constant(K, ParamPoly(Rational(1)));
        for (auto& k : e->kids) r = aux.mul(r, eval_aux(k, aux));
        return r;
    }
    case ExprKind::Pow: {
        LaurentForm base = eval_aux(e->kids[0], aux);
        if (e->exponent >= 0) return aux.pow(base, static_cast<unsigned>(e->exponent));
        return base.pow(e->exponent);
    }
    case ExprKind::DMarker:
        return aux.dkernel(aux.kernel_index(e->sym), e->order);
    default:
        throw std::invalid_argument("cannot evaluate over the kernel ring: " + to_string(e));
    }
}

Expr reduce_marker(const Expr& e, const AuxSystem& aux) {
    return eval_aux(e, aux).to_expr();
}

} // namespace fex
