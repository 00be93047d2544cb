#include "fexpand/jsonio.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace fex;

namespace {

struct RunConfig {
    std::string equation;
    std::vector<std::string> params;
    std::string aux = "tanh";
    unsigned arity = 0; // 0: from the aux system
    unsigned max_order = 12;
    unsigned max_depth = 10;
    unsigned max_branches = 4096;
    unsigned timeout_seconds = 0;
    std::string format = "text";
    std::string fixtures;
};

struct Timeout {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    unsigned limit_seconds = 0;

    // Checked between pipeline stages; a stage in flight is never interrupted.
    void check() const {
        if (!limit_seconds) return;
        auto elapsed = std::chrono::steady_clock::now() - start;
        if (std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() >=
            limit_seconds)
            throw std::runtime_error("time budget exhausted");
    }
};

struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

AuxSystem make_aux(const std::string& spec) {
    std::string name = spec;
    std::map<std::string, Rational> params;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        name = spec.substr(0, colon);
        std::istringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("aux parameter must be key=value: " + item);
            auto v = parse_rational(item.substr(eq + 1));
            if (!v) throw std::invalid_argument("bad aux parameter value in " + item);
            params[item.substr(0, eq)] = *v;
        }
    }
    return AuxSystem::builtin(name, params);
}

std::string latex_expr(const Expr& e);

std::string latex_factor(const Expr& e) {
    std::string s = latex_expr(e);
    if (e->kind == ExprKind::Sum) return "\\left(" + s + "\\right)";
    return s;
}

int kernel_power_of(const Expr& e) {
    if (e->kind == ExprKind::KernelApp) return 1;
    if (e->kind == ExprKind::Pow && e->kids[0]->kind == ExprKind::KernelApp)
        return e->exponent;
    if (e->kind == ExprKind::Prod) {
        int m = 0;
        for (auto& k : e->kids) m = std::max(m, kernel_power_of(k));
        return m;
    }
    return 0;
}

std::string latex_name(const std::string& n) {
    static const std::map<std::string, std::string> greek = {
        {"alpha", "\\alpha"}, {"beta", "\\beta"},   {"gamma", "\\gamma"},
        {"delta", "\\delta"}, {"eps", "\\epsilon"}, {"epsilon", "\\epsilon"},
        {"mu", "\\mu"},       {"lambda", "\\lambda"},
    };
    auto it = greek.find(n);
    if (it != greek.end()) return it->second;
    auto us = n.find('_');
    if (us != std::string::npos && us + 1 < n.size())
        return latex_name(n.substr(0, us)) + "_{" + n.substr(us + 1) + "}";
    if (n.size() >= 2 && std::isdigit(static_cast<unsigned char>(n.back()))) {
        std::size_t i = n.size();
        while (i > 1 && std::isdigit(static_cast<unsigned char>(n[i - 1]))) --i;
        return latex_name(n.substr(0, i)) + "_{" + n.substr(i) + "}";
    }
    return n;
}

std::string latex_expr(const Expr& e) {
    switch (e->kind) {
    case ExprKind::Const: {
        Rational v = e->value;
        std::string sign = v < 0 ? "-" : "";
        if (v < 0) v = -v;
        if (den(v) == 1) return sign + num(v).str();
        return sign + "\\frac{" + num(v).str() + "}{" + den(v).str() + "}";
    }
    case ExprKind::SymRef:
        return latex_name(e->sym.name());
    case ExprKind::Sum: {
        // Paper-style layout: kernel powers descending.
        std::vector<Expr> kids = e->kids;
        std::stable_sort(kids.begin(), kids.end(), [](const Expr& a, const Expr& b) {
            return kernel_power_of(a) > kernel_power_of(b);
        });
        std::string out;
        for (auto& k : kids) {
            std::string s = latex_expr(k);
            if (!out.empty()) out += s.rfind('-', 0) == 0 ? " " : " + ";
            out += s;
        }
        return out.empty() ? "0" : out;
    }
    case ExprKind::Prod: {
        std::string out;
        for (auto& k : e->kids) {
            if (!out.empty()) out += " ";
            out += latex_factor(k);
        }
        return out;
    }
    case ExprKind::Pow: {
        if (e->exponent < 0 && e->kids[0]->kind != ExprKind::KernelApp)
            return "\\frac{1}{" + latex_factor(e->kids[0]) + "^{" +
                   std::to_string(-e->exponent) + "}}";
        std::string base = latex_factor(e->kids[0]);
        if (e->kids[0]->kind == ExprKind::KernelApp) {
            auto open = base.find("\\left(");
            if (open != std::string::npos)
                return base.substr(0, open) + "^{" + std::to_string(e->exponent) + "}" +
                       base.substr(open);
        }
        return base + "^{" + std::to_string(e->exponent) + "}";
    }
    case ExprKind::KernelApp: {
        std::string fn = e->sym.name();
        static const std::map<std::string, std::string> named = {
            {"tanh", "\\tanh"}, {"tan", "\\tan"},   {"exp", "\\exp"},
            {"sinh", "\\sinh"}, {"cosh", "\\cosh"}, {"sin", "\\sin"},
            {"cos", "\\cos"},   {"sn", "\\mathrm{sn}"}, {"cn", "\\mathrm{cn}"},
            {"dn", "\\mathrm{dn}"},
        };
        auto it = named.find(fn);
        std::string head = it != named.end() ? it->second : fn;
        return head + "\\left(" + latex_expr(e->kids[0]) + "\\right)";
    }
    case ExprKind::DerivAtom: {
        unsigned total = 0;
        for (auto& [v, k] : e->orders) total += k;
        return latex_name(e->sym.name()) + "^{(" + std::to_string(total) + ")}";
    }
    default:
        return to_string(e);
    }
}

struct Pipeline {
    PdeSpec p;
    WaveSub w;
    OdeSpec o;
};

Pipeline run_reduce(const RunConfig& cfg) {
    Pipeline pl;
    pl.p = parse_pde(cfg.equation, cfg.params);
    pl.w = standard_wave(pl.p);
    pl.o = reduce_pde(pl.p, pl.w);
    return pl;
}

int cmd_reduce(const RunConfig& cfg) {
    Pipeline pl = run_reduce(cfg);
    if (cfg.format == "json") {
        std::cout << reduce_json(pl.p, pl.w, pl.o);
    } else if (cfg.format == "latex") {
        std::cout << latex_expr(pl.o.lhs) << " = 0\n";
    } else {
        std::cout << to_string(pl.o.lhs) << " = 0\n";
    }
    return 0;
}

int cmd_balance(const RunConfig& cfg) {
    Pipeline pl = run_reduce(cfg);
    AuxSystem aux = make_aux(cfg.aux);
    unsigned arity = cfg.arity ? cfg.arity : static_cast<unsigned>(aux.arity());
    AnsatzShape shape = balance(pl.o, aux, arity, cfg.max_order);
    if (cfg.format == "json") {
        std::cout << balance_json(pl.p, aux, shape);
    } else {
        for (auto& [mask, orders] : shape.orders) {
            std::cout << block_prefix(shape.arity, mask) << ":";
            for (unsigned m : orders) std::cout << " " << m;
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_solve(const RunConfig& cfg) {
    Timeout clock{std::chrono::steady_clock::now(), cfg.timeout_seconds};
    Pipeline pl = run_reduce(cfg);
    AuxSystem aux = make_aux(cfg.aux);
    unsigned arity = cfg.arity ? cfg.arity : static_cast<unsigned>(aux.arity());
    AnsatzShape shape = balance(pl.o, aux, arity, cfg.max_order);
    clock.check();
    AnsatzInstance inst = build(shape, aux);
    ResidualDecomposition res = substitute(pl.o, inst, aux);
    clock.check();
    std::vector<Sym> unknowns = inst.coeff_syms;
    for (Sym s : pl.w.wave_params) unknowns.push_back(s);
    AlgSystem sys = extract_system(res, std::move(unknowns));
    SolveBudget budget{cfg.max_depth, cfg.max_branches};
    clock.check();
    SolveResult sol = solve_system(sys, budget);
    clock.check();

    // a family whose wave vector vanishes identically has a constant phase
    // and is not a travelling wave; drop it from the report
    std::erase_if(sol.families, [&](const SolutionFamily& fam) {
        for (Sym s : pl.w.wave_params) {
            auto it = fam.assignment.find(s);
            if (it == fam.assignment.end() || !it->second.num.is_zero()) return false;
        }
        return true;
    });

    if (cfg.format == "json") {
        std::cout << solve_json(pl.p, pl.w, aux, shape, inst, sol);
    } else {
        std::size_t i = 0;
        for (auto& fam : sol.families) {
            ClosedFormSolution cs = family_to_solution(fam, inst, aux, pl.w, pl.p);
            std::cout << "family " << ++i << ": u = "
                      << (cfg.format == "latex" ? latex_expr(cs.expression)
                                                : to_string(cs.expression))
                      << "\n";
            for (auto& c : fam.side_conditions)
                std::cout << "  where " << c.str() << " != 0\n";
        }
        if (sol.budget_hit) std::cout << "(budget exhausted: partial result)\n";
    }
    if (sol.budget_hit) throw BudgetExhausted("solver budget exhausted");
    return 0;
}

int run_verify(const std::string& path, const std::string& format) {
    CorpusSummary sum = verify_corpus(load_fixtures(path));
    if (format == "json") {
        std::cout << corpus_json(sum);
    } else {
        for (auto& o : sum.outcomes) {
            std::cout << o.name << ": "
                      << (!o.error.empty() ? "error" : o.zero ? "zero" : "nonzero")
                      << (o.as_expected ? "" : " [unexpected]") << "\n";
            if (!o.error.empty()) std::cout << "  " << o.error << "\n";
            else if (!o.zero && !o.residual.empty())
                std::cout << "  residual: " << o.residual << "\n";
        }
        std::cout << sum.zero_count << "/" << sum.outcomes.size() << " zero, "
                  << sum.mismatches << " unexpected\n";
    }
    return sum.mismatches == 0 ? 0 : 1;
}

std::string default_corpus() {
    if (const char* env = std::getenv("FEXPAND_CORPUS")) return env;
    if (std::filesystem::exists("data/corpus.json")) return "data/corpus.json";
#ifdef FEXPAND_DEFAULT_CORPUS
    return FEXPAND_DEFAULT_CORPUS;
#else
    return "data/corpus.json";
#endif
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"travelling-wave expansion engine"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* c, bool needs_equation) {
        if (needs_equation)
            c->add_option("equation", cfg.equation, "equation text, e.g. \"u_t + u*u_x = 0\"")
                ->required();
        c->add_option("--params", cfg.params, "declared parameter names")->delimiter(',');
        c->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "text", "latex"}));
    };
    auto add_aux = [&](CLI::App* c) {
        c->add_option("--aux", cfg.aux, "auxiliary system NAME[:k=v,...]");
        c->add_option("--arity", cfg.arity, "kernel count override");
        c->add_option("--max-order", cfg.max_order, "balance order bound");
    };

    CLI::App* reduce = app.add_subcommand("reduce", "travelling-wave reduction to an ODE");
    add_common(reduce, true);

    CLI::App* bal = app.add_subcommand("balance", "expansion-order balance");
    add_common(bal, true);
    add_aux(bal);

    CLI::App* solve = app.add_subcommand("solve", "full derivation pipeline");
    add_common(solve, true);
    add_aux(solve);
    solve->add_option("--max-depth", cfg.max_depth, "solver branching depth");
    solve->add_option("--max-branches", cfg.max_branches, "solver branch budget");
    solve->add_option("--timeout-seconds", cfg.timeout_seconds,
                      "wall-clock budget, checked between stages");

    CLI::App* verify = app.add_subcommand("verify", "verify solution fixtures");
    verify->add_option("--fixtures", cfg.fixtures, "fixture JSON path")->required();
    verify->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "text", "latex"}));

    CLI::App* corpus = app.add_subcommand("corpus", "verify the bundled corpus");
    corpus->add_option("--fixtures", cfg.fixtures, "fixture JSON path override");
    corpus->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "text", "latex"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (reduce->parsed()) return cmd_reduce(cfg);
        if (bal->parsed()) return cmd_balance(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        if (verify->parsed()) return run_verify(cfg.fixtures, cfg.format);
        if (corpus->parsed())
            return run_verify(cfg.fixtures.empty() ? default_corpus() : cfg.fixtures,
                              cfg.format);
    } catch (const BudgetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        if (std::string(e.what()).find("budget") != std::string::npos) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
