#include "fexpand/verify.hpp"

#include "fexpand/ansatz.hpp"

#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fex {

namespace {

enum class KernelGroup { Tanh, Tan, Exp, SinhCosh, SinCos, Jacobi };

const std::map<std::string, KernelGroup>& group_of_name() {
    static const std::map<std::string, KernelGroup> m = {
        {"tanh", KernelGroup::Tanh},    {"tan", KernelGroup::Tan},
        {"exp", KernelGroup::Exp},      {"sinh", KernelGroup::SinhCosh},
        {"cosh", KernelGroup::SinhCosh}, {"sin", KernelGroup::SinCos},
        {"cos", KernelGroup::SinCos},   {"sn", KernelGroup::Jacobi},
        {"cn", KernelGroup::Jacobi},    {"dn", KernelGroup::Jacobi},
    };
    return m;
}

Sym kernel_sym(const char* name) { return symtab::intern(name, SymKind::Kernel); }

Sym modulus_sym() {
    if (auto s = symtab::find("k")) {
        if (s->kind() != SymKind::Modulus)
            throw std::invalid_argument("symbol k is reserved for the elliptic modulus");
        return *s;
    }
    return symtab::intern("k", SymKind::Modulus);
}

struct Group {
    KernelGroup id;
    AuxSystem sys;
    std::map<Sym, LaurentForm> images; // named kernel -> form in sys kernels
    std::vector<Sym> modulus;
};

Group make_group(KernelGroup id) {
    switch (id) {
    case KernelGroup::Tanh: {
        Sym t = kernel_sym("tanh");
        std::vector<Sym> ks{t};
        LaurentForm rhs = LaurentForm::constant(ks, ParamPoly(Rational(1))) -
                          LaurentForm::kernel_power(ks, 0, 2);
        AuxSystem sys = AuxSystem::custom("tanh-gen", ks, {{false, rhs}}, {});
        return {id, sys, {{t, LaurentForm::kernel_power(ks, 0, 1)}}, {}};
    }
    case KernelGroup::Tan: {
        Sym t = kernel_sym("tan");
        std::vector<Sym> ks{t};
        LaurentForm rhs = LaurentForm::constant(ks, ParamPoly(Rational(1))) +
                          LaurentForm::kernel_power(ks, 0, 2);
        AuxSystem sys = AuxSystem::custom("tan-gen", ks, {{false, rhs}}, {});
        return {id, sys, {{t, LaurentForm::kernel_power(ks, 0, 1)}}, {}};
    }
    case KernelGroup::Exp: {
        Sym e = kernel_sym("exp");
        std::vector<Sym> ks{e};
        AuxSystem sys =
            AuxSystem::custom("exp-gen", ks, {{false, LaurentForm::kernel_power(ks, 0, 1)}}, {});
        return {id, sys, {{e, LaurentForm::kernel_power(ks, 0, 1)}}, {}};
    }
    case KernelGroup::SinhCosh: {
        Sym gen = kernel_sym("Egen");
        std::vector<Sym> ks{gen};
        AuxSystem sys = AuxSystem::custom("sinh-cosh-gen", ks,
                                          {{false, LaurentForm::kernel_power(ks, 0, 1)}}, {});
        Rational half(1, 2);
        LaurentForm plus = LaurentForm::kernel_power(ks, 0, 1) * ParamPoly(half);
        LaurentForm minus = LaurentForm::kernel_power(ks, 0, -1) * ParamPoly(half);
        return {id, sys,
                {{kernel_sym("cosh"), plus + minus}, {kernel_sym("sinh"), plus - minus}},
                {}};
    }
    case KernelGroup::SinCos: {
        Sym s = kernel_sym("sin"), c = kernel_sym("cos");
        std::vector<Sym> ks{s, c};
        LaurentForm ds = LaurentForm::kernel_power(ks, 1, 1);
        LaurentForm dc = -LaurentForm::kernel_power(ks, 0, 1);
        LaurentForm csq = LaurentForm::constant(ks, ParamPoly(Rational(1))) -
                          LaurentForm::kernel_power(ks, 0, 2);
        AuxSystem sys =
            AuxSystem::custom("sin-cos-named", ks, {{false, ds}, {false, dc}}, {{1, csq}});
        return {id, sys,
                {{s, LaurentForm::kernel_power(ks, 0, 1)},
                 {c, LaurentForm::kernel_power(ks, 1, 1)}},
                {}};
    }
    case KernelGroup::Jacobi: {
        Sym sn = kernel_sym("sn"), cn = kernel_sym("cn"), dn = kernel_sym("dn");
        Sym k = modulus_sym();
        std::vector<Sym> ks{sn, cn, dn};
        auto kp = [&](std::size_t i, int e) { return LaurentForm::kernel_power(ks, i, e); };
        LaurentForm dsn = kp(1, 1) * kp(2, 1);
        LaurentForm dcn = -(kp(0, 1) * kp(2, 1));
        LaurentForm ddn = (kp(0, 1) * kp(1, 1)) * -ParamPoly(k, 2);
        LaurentForm one = LaurentForm::constant(ks, ParamPoly(Rational(1)));
        LaurentForm cnsq = one - kp(0, 2);
        LaurentForm dnsq = one - kp(0, 2) * ParamPoly(k, 2);
        AuxSystem sys = AuxSystem::custom("jacobi-named", ks,
                                          {{false, dsn}, {false, dcn}, {false, ddn}},
                                          {{1, cnsq}, {2, dnsq}}, {k});
        return {id, sys, {{sn, kp(0, 1)}, {cn, kp(1, 1)}, {dn, kp(2, 1)}}, {k}};
    }
    }
    throw std::logic_error("unhandled kernel group");
}

void collect_kernel_apps(const Expr& e, std::vector<std::pair<Sym, Expr>>& out) {
    if (e->kind == ExprKind::KernelApp) {
        if (e->kids.empty() || !e->kids[0])
            throw std::invalid_argument("kernel " + e->sym.name() + " without an argument");
        out.emplace_back(e->sym, e->kids[0]);
        return;
    }
    for (auto& kid : e->kids)
        if (kid) collect_kernel_apps(kid, out);
}

// Rational function of parameter symbols parsed from a phase expression.
RatFun expr_to_ratfun(const Expr& e) {
    switch (e->kind) {
    case ExprKind::Const:
        return RatFun::from(ParamPoly(e->value));
    case ExprKind::SymRef:
        return RatFun::from(ParamPoly(e->sym));
    case ExprKind::Sum: {
        RatFun r = RatFun::from(ParamPoly());
        for (auto& kid : e->kids) {
            RatFun v = expr_to_ratfun(kid);
            r = {r.num * v.den + v.num * r.den, r.den * v.den};
        }
        return r;
    }
    case ExprKind::Prod: {
        RatFun r = RatFun::from(ParamPoly(Rational(1)));
        for (auto& kid : e->kids) {
            RatFun v = expr_to_ratfun(kid);
            r = {r.num * v.num, r.den * v.den};
        }
        return r;
    }
    case ExprKind::Pow: {
        RatFun b = expr_to_ratfun(e->kids[0]);
        int n = e->exponent;
        if (n < 0) {
            if (b.num.is_zero()) throw std::invalid_argument("division by zero in a phase");
            std::swap(b.num, b.den);
            n = -n;
        }
        RatFun r = RatFun::from(ParamPoly(Rational(1)));
        for (int i = 0; i < n; ++i) r = {r.num * b.num, r.den * b.den};
        return r;
    }
    default:
        throw std::invalid_argument("phase is not an algebraic expression: " + to_string(e));
    }
}

// Laurent form with a common polynomial denominator; the denominator is
// assumed nonzero (a zero denominator is the caller's error).
struct RatForm {
    LaurentForm form;
    ParamPoly den{Rational(1)};
};

RatForm rf_add(const AuxSystem&, const RatForm& a, const RatForm& b) {
    return {a.form * b.den + b.form * a.den, a.den * b.den};
}

RatForm rf_mul(const AuxSystem& sys, const RatForm& a, const RatForm& b) {
    return {sys.mul(a.form, b.form), a.den * b.den};
}

RatForm rf_inverse(const AuxSystem& sys, const RatForm& a) {
    if (a.form.terms().size() != 1)
        throw std::invalid_argument("inverse of a non-monomial solution factor");
    const auto& [key, coeff] = *a.form.terms().begin();
    if (key.markers) throw std::invalid_argument("inverse of a derivative marker");
    LKey inv = key;
    for (auto& e : inv.exps) e = -e;
    LaurentForm f(sys.kernels());
    f.add_term(std::move(inv), a.den);
    return {std::move(f), coeff};
}

RatForm rf_pow(const AuxSystem& sys, RatForm base, int e) {
    if (e < 0) {
        base = rf_inverse(sys, base);
        e = -e;
    }
    RatForm r{LaurentForm::constant(sys.kernels(), ParamPoly(Rational(1)))};
    while (e) {
        if (e & 1) r = rf_mul(sys, r, base);
        e >>= 1;
        if (e) base = rf_mul(sys, base, base);
    }
    return r;
}

RatForm eval_solution(const Expr& e, const Group& g) {
    const AuxSystem& sys = g.sys;
    switch (e->kind) {
    case ExprKind::Const:
        return {LaurentForm::constant(sys.kernels(), ParamPoly(e->value))};
    case ExprKind::SymRef:
        if (e->sym.kind() == SymKind::Kernel)
            throw std::invalid_argument("bare kernel symbol " + e->sym.name() +
                                        " in a solution");
        return {LaurentForm::constant(sys.kernels(), ParamPoly(e->sym))};
    case ExprKind::KernelApp: {
        auto it = g.images.find(e->sym);
        if (it == g.images.end())
            throw std::invalid_argument("kernel " + e->sym.name() +
                                        " outside the detected kernel family");
        return {it->second};
    }
    case ExprKind::Sum: {
        RatForm r{LaurentForm(sys.kernels())};
        for (auto& kid : e->kids) r = rf_add(sys, r, eval_solution(kid, g));
        return r;
    }
    case ExprKind::Prod: {
        RatForm r{LaurentForm::constant(sys.kernels(), ParamPoly(Rational(1)))};
        for (auto& kid : e->kids) r = rf_mul(sys, r, eval_solution(kid, g));
        return r;
    }
    case ExprKind::Pow:
        return rf_pow(g.sys, eval_solution(e->kids[0], g), e->exponent);
    default:
        throw std::invalid_argument("unsupported node in a solution: " + to_string(e));
    }
}

ParamPoly reduce_relations(const ParamPoly& p, const std::vector<QuadRelation>& rels) {
    ParamPoly r = p;
    for (auto& rel : rels) r = r.reduce_square(rel.sym, ParamPoly(rel.square));
    return r;
}

LaurentForm reduce_relations(const LaurentForm& f, const std::vector<QuadRelation>& rels) {
    if (rels.empty()) return f;
    LaurentForm r(f.kernels());
    for (auto& [k, c] : f.terms()) r.add_term(k, reduce_relations(c, rels));
    return r;
}

unsigned max_deriv_order(const Expr& e) {
    unsigned m = 0;
    if (e->kind == ExprKind::DerivAtom) {
        unsigned total = 0;
        for (auto& [v, k] : e->orders) total += k;
        m = total;
    }
    unsigned factor = e->kind == ExprKind::Pow ? static_cast<unsigned>(std::abs(e->exponent))
                                               : 1;
    for (auto& kid : e->kids)
        if (kid) m = std::max(m, factor * max_deriv_order(kid));
    return m;
}

RatForm eval_pde_lhs(const Expr& e, const PdeSpec& p, const Group& g,
                     const std::vector<RatForm>& dv,
                     const std::vector<RatFun>& phase_coeffs) {
    const AuxSystem& sys = g.sys;
    switch (e->kind) {
    case ExprKind::Const:
        return {LaurentForm::constant(sys.kernels(), ParamPoly(e->value))};
    case ExprKind::SymRef:
        if (e->sym == p.dependent) return dv[0];
        return {LaurentForm::constant(sys.kernels(), ParamPoly(e->sym))};
    case ExprKind::DerivAtom: {
        if (e->sym != p.dependent)
            throw std::invalid_argument("derivative of a non-dependent symbol");
        unsigned total = 0;
        RatFun factor = RatFun::from(ParamPoly(Rational(1)));
        for (auto& [var, k] : e->orders) {
            auto it = std::find(p.independents.begin(), p.independents.end(), var);
            if (it == p.independents.end())
                throw std::invalid_argument("derivative in unknown variable " + var.name());
            const RatFun& c = phase_coeffs[static_cast<std::size_t>(
                it - p.independents.begin())];
            for (unsigned j = 0; j < k; ++j)
                factor = {factor.num * c.num, factor.den * c.den};
            total += k;
        }
        return {dv.at(total).form * factor.num, dv.at(total).den * factor.den};
    }
    case ExprKind::Sum: {
        RatForm r{LaurentForm(sys.kernels())};
        for (auto& kid : e->kids)
            r = rf_add(sys, r, eval_pde_lhs(kid, p, g, dv, phase_coeffs));
        return r;
    }
    case ExprKind::Prod: {
        RatForm r{LaurentForm::constant(sys.kernels(), ParamPoly(Rational(1)))};
        for (auto& kid : e->kids)
            r = rf_mul(sys, r, eval_pde_lhs(kid, p, g, dv, phase_coeffs));
        return r;
    }
    case ExprKind::Pow:
        return rf_pow(sys, eval_pde_lhs(e->kids[0], p, g, dv, phase_coeffs), e->exponent);
    default:
        throw std::invalid_argument("unexpected node in a PDE: " + to_string(e));
    }
}

std::vector<double> kernel_values(KernelGroup id, double phi, double kmod) {
    switch (id) {
    case KernelGroup::Tanh:
        return {std::tanh(phi)};
    case KernelGroup::Tan:
        return {std::tan(phi)};
    case KernelGroup::Exp:
    case KernelGroup::SinhCosh:
        return {std::exp(phi)};
    case KernelGroup::SinCos:
        return {std::sin(phi), std::cos(phi)};
    case KernelGroup::Jacobi: {
        double cn = 0, dn = 0;
        double sn = boost::math::jacobi_elliptic(kmod, phi, &cn, &dn);
        return {sn, cn, dn};
    }
    }
    throw std::logic_error("unhandled kernel group");
}

// Relative magnitude of the residual form at one sample point:
// |sum of terms| / max(1, sum of |term|).
double sample_residual(const LaurentForm& f, const std::map<Sym, double>& vals,
                       const std::vector<double>& kv) {
    double total = 0, scale = 0;
    for (auto& [key, coeff] : f.terms()) {
        double term = coeff.eval_double(vals);
        for (std::size_t i = 0; i < kv.size(); ++i)
            term *= std::pow(kv[i], key.exps[i]);
        total += term;
        scale += std::abs(term);
    }
    return std::abs(total) / std::max(1.0, scale);
}

constexpr double kPoleThreshold = 0.25;

} // namespace

ResidualReport verify_solution(const ClosedFormSolution& sol, const PdeSpec& p,
                               unsigned samples, unsigned seed) {
    std::vector<std::pair<Sym, Expr>> apps;
    collect_kernel_apps(sol.expression, apps);

    KernelGroup gid = KernelGroup::Tanh;
    Expr phase;
    for (auto& [kernel, arg] : apps) {
        auto it = group_of_name().find(kernel.name());
        if (it == group_of_name().end())
            throw std::invalid_argument("no numeric realization for kernel " + kernel.name());
        if (!phase) {
            gid = it->second;
            phase = arg;
        } else {
            if (it->second != gid)
                throw std::invalid_argument("kernels from different families in one solution");
            if (!equal(phase, arg))
                throw std::invalid_argument("kernels applied to different phases");
        }
    }

    Group g = make_group(gid);

    // Affine phase decomposition: phi = sum c_i x_i + c_0.
    std::vector<RatFun> coeffs(p.independents.size(), RatFun::from(ParamPoly()));
    if (phase) {
        RatFun ph = expr_to_ratfun(phase);
        for (auto& [mono, c] : ph.num.terms()) {
            unsigned vdeg = 0;
            std::size_t which = 0;
            Mono rest;
            for (auto& [s, e] : mono) {
                auto it = std::find(p.independents.begin(), p.independents.end(), s);
                if (it != p.independents.end()) {
                    vdeg += e;
                    which = static_cast<std::size_t>(it - p.independents.begin());
                } else {
                    rest.emplace_back(s, e);
                }
            }
            if (vdeg > 1) throw std::invalid_argument("phase is not affine in the variables");
            if (vdeg == 1) {
                coeffs[which].num += ParamPoly::term(rest, c);
                coeffs[which].den = ph.den;
            }
        }
        for (Sym v : p.independents)
            if (ph.den.depends_on(v))
                throw std::invalid_argument("phase denominator depends on the variables");
    }

    RatForm v = eval_solution(sol.expression, g);

    unsigned max_order = max_deriv_order(p.lhs);
    std::vector<RatForm> dv{v};
    for (unsigned k = 1; k <= max_order; ++k)
        dv.push_back({g.sys.derivative(dv.back().form), dv.back().den});

    RatForm residual = eval_pde_lhs(p.lhs, p, g, dv, coeffs);

    LaurentForm reduced = reduce_relations(residual.form, sol.relations);
    auto canon = g.sys.canonicalize(reduced);
    canon.form = reduce_relations(canon.form, sol.relations);

    ResidualReport rep;
    rep.zero = canon.form.terms().empty();
    if (!rep.zero) rep.residual = canon.form.str();
    {
        std::ostringstream os;
        os << "kernel family " << g.sys.name();
        if (phase) os << "; phase " << to_string(phase);
        rep.detail = os.str();
    }

    // Numeric spot check of the unreduced residual form.
    std::set<Sym> sample_syms;
    for (auto& [key, c] : residual.form.terms())
        for (Sym s : c.symbols()) sample_syms.insert(s);
    for (auto& rel : sol.relations) sample_syms.insert(rel.sym);
    for (Sym m : g.modulus) sample_syms.insert(m);

    auto [lo, hi] = residual.form.exponent_range();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    std::uniform_real_distribution<double> kdist(0.3, 0.8);
    for (unsigned i = 0; i < samples; ++i) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            std::map<Sym, double> vals;
            double kmod = 0.5;
            for (Sym s : sample_syms) {
                auto rel = std::find_if(sol.relations.begin(), sol.relations.end(),
                                        [&](const QuadRelation& r) { return r.sym == s; });
                if (rel != sol.relations.end()) {
                    double root = std::sqrt(to_double(rel->square));
                    vals[s] = rng() & 1 ? root : -root;
                } else if (s.kind() == SymKind::Modulus) {
                    kmod = kdist(rng);
                    vals[s] = kmod;
                } else {
                    double x = unit(rng);
                    vals[s] = std::abs(x) < 0.2 ? x + (x < 0 ? -0.3 : 0.3) : x;
                }
            }
            double phi = 1.5 * unit(rng) / 2.0;
            std::vector<double> kv = kernel_values(g.id, phi, kmod);
            bool pole = false;
            for (std::size_t j = 0; j < kv.size(); ++j) {
                if (lo[j] < 0 && std::abs(kv[j]) < kPoleThreshold) pole = true;
                if (std::abs(kv[j]) > 1e3) pole = true;
            }
            if (pole) continue;
            rep.samples.push_back(sample_residual(residual.form, vals, kv));
            break;
        }
    }
    return rep;
}

namespace {

Sym find_or_intern(const std::string& name, SymKind kind) {
    if (auto s = symtab::find(name)) return *s;
    return symtab::intern(name, kind);
}

QuadRelation parse_relation(const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    auto pos = text.find("^2=");
    if (pos == std::string::npos || pos == 0)
        throw std::invalid_argument("relation must have the form name^2=value: " + text);
    QuadRelation r;
    r.sym = find_or_intern(text.substr(0, pos), SymKind::FreeConstant);
    auto sq = parse_rational(text.substr(pos + 3));
    if (!sq) throw std::invalid_argument("bad relation value in " + text);
    r.square = *sq;
    return r;
}

} // namespace

ResidualReport verify_fixture(const SolutionFixture& f) {
    PdeSpec p = parse_pde(f.equation, f.equation_params);

    ExprParseContext ctx;
    for (Sym v : p.independents) ctx.idents[v.name()] = v;
    for (Sym s : p.params) ctx.idents[s.name()] = s;
    ClosedFormSolution sol;
    for (auto& name : f.params) {
        Sym s = find_or_intern(name, SymKind::FreeConstant);
        ctx.idents[name] = s;
        sol.free_params.insert(s);
    }
    for (auto& rel : f.relations) {
        QuadRelation r = parse_relation(rel);
        ctx.idents[r.sym.name()] = r.sym;
        sol.relations.push_back(r);
    }
    for (auto& [name, grp] : group_of_name()) {
        (void)grp;
        ctx.kernels[name] = kernel_sym(name.c_str());
    }
    sol.expression = parse_expr(f.solution, ctx);
    return verify_solution(sol, p);
}

CorpusSummary verify_corpus(const std::vector<SolutionFixture>& fixtures) {
    CorpusSummary sum;
    for (auto& f : fixtures) {
        FixtureOutcome out;
        out.name = f.name;
        try {
            ResidualReport rep = verify_fixture(f);
            out.zero = rep.zero;
            out.residual = rep.residual;
            out.as_expected = rep.zero == (f.expect == "zero");
        } catch (const std::exception& e) {
            out.error = e.what();
            out.as_expected = false;
        }
        if (out.zero) ++sum.zero_count;
        if (!out.as_expected) ++sum.mismatches;
        sum.outcomes.push_back(std::move(out));
    }
    return sum;
}

std::vector<std::string> display_kernel_names(const AuxSystem& aux) {
    const std::string& n = aux.name();
    if (n == "tanh") return {"tanh"};
    if (n == "tan") return {"tan"};
    if (n == "exp") return {"exp"};
    if (n == "sinh-cosh") return {"cosh", "sinh"};
    if (n == "sin-cos") return {"sin", "cos"};
    if (n == "jacobi-sn-cn-dn") return {"sn", "cn", "dn"};
    std::vector<std::string> names;
    for (Sym k : aux.kernels()) names.push_back(k.name());
    return names;
}

ClosedFormSolution family_to_solution(const SolutionFamily& f, const AnsatzInstance& a,
                                      const AuxSystem& aux, const WaveSub& w,
                                      const PdeSpec& p) {
    auto ratfun_expr = [](const RatFun& r) {
        Expr num = poly_expr(r.num);
        if (r.den.is_constant() && r.den.constant_value() == Rational(1)) return num;
        return make_prod({num, make_pow(poly_expr(r.den), -1)});
    };

    std::vector<Expr> phase_terms;
    for (std::size_t i = 0; i < w.wave_params.size(); ++i) {
        Sym s = w.wave_params[i];
        auto it = f.assignment.find(s);
        Expr val = it == f.assignment.end() ? make_sym(s) : ratfun_expr(it->second);
        phase_terms.push_back(make_prod({val, make_sym(p.independents.at(i))}));
    }
    Expr phase = make_sum(std::move(phase_terms));

    std::vector<std::string> names = display_kernel_names(aux);
    std::map<Sym, Expr> subst;
    for (std::size_t i = 0; i < aux.kernels().size(); ++i)
        subst[aux.kernels()[i]] =
            make_kernel_app(kernel_sym(names.at(i).c_str()), phase);

    // evaluate each Laurent coefficient under the assignment so settled
    // coefficients collapse (and vanished terms drop) before display
    auto subst_ratfun = [&](const ParamPoly& poly) {
        RatFun acc{ParamPoly(Rational(0)), ParamPoly(Rational(1))};
        for (auto& [m, c] : poly.terms()) {
            RatFun t{ParamPoly(c), ParamPoly(Rational(1))};
            for (auto& [s, k] : m) {
                auto it = f.assignment.find(s);
                RatFun base = it != f.assignment.end()
                                  ? it->second
                                  : RatFun{ParamPoly(s), ParamPoly(Rational(1))};
                for (unsigned j = 0; j < k; ++j)
                    t = RatFun{t.num * base.num, t.den * base.den};
            }
            acc = RatFun{acc.num * t.den + t.num * acc.den, acc.den * t.den};
        }
        return acc;
    };

    LaurentForm lf = aux.apply_rules(eval_aux(a.body, aux));
    std::vector<Expr> body_terms;
    for (auto& [key, coeff] : lf.terms()) {
        RatFun cv = subst_ratfun(coeff);
        if (cv.num.is_zero()) continue;
        LaurentForm unit(lf.kernels());
        unit.add_term(key, ParamPoly(Rational(1)));
        body_terms.push_back(make_prod({ratfun_expr(cv), unit.to_expr()}));
    }
    Expr body = make_sum(std::move(body_terms));

    ClosedFormSolution sol;
    sol.expression = substitute(body, subst);
    sol.free_params = f.free_syms;
    for (Sym m : aux.modulus_params()) sol.free_params.insert(m);
    sol.side_conditions = f.side_conditions;
    return sol;
}

} // namespace fex
