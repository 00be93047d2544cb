#include "fexpand/algsolve.hpp"
#include "fexpand/verify.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

using namespace fex;

namespace {

const char* kSecondOrder = "u_xx + u*u_x - u_t + u - u^2 = 0";
const char* kFifthOrder = "u_t + 6*u*u_x + u_xxx - u_xxxxx = 0";
const char* kFifthCubic = "u_t + 5*u^2*u_x + 5*u_x*u_xx + 5*u*u_xxx + u_xxxxx = 0";

OdeSpec reduced(const std::string& eq) {
    PdeSpec p = parse_pde(eq);
    return reduce_pde(p, standard_wave(p));
}

void BM_reduce(benchmark::State& state, const char* eq) {
    for (auto _ : state) {
        OdeSpec o = reduced(eq);
        benchmark::DoNotOptimize(o.lhs);
    }
}

void BM_balance(benchmark::State& state, const char* eq) {
    AuxSystem aux = AuxSystem::builtin("tanh");
    OdeSpec o = reduced(eq);
    for (auto _ : state) {
        AnsatzShape s = balance(o, aux, 1, 12);
        benchmark::DoNotOptimize(s.orders);
    }
}

void BM_collect(benchmark::State& state, const char* eq, unsigned order) {
    AuxSystem aux = AuxSystem::builtin("tanh");
    OdeSpec o = reduced(eq);
    AnsatzInstance inst = build(AnsatzShape::uniform(1, order), aux);
    for (auto _ : state) {
        ResidualDecomposition rd = substitute(o, inst, aux);
        benchmark::DoNotOptimize(rd.residual);
    }
}

void BM_solve(benchmark::State& state, const char* eq, unsigned order) {
    PdeSpec p = parse_pde(eq);
    WaveSub w = standard_wave(p);
    OdeSpec o = reduce_pde(p, w);
    AuxSystem aux = AuxSystem::builtin("tanh");
    AnsatzInstance inst = build(AnsatzShape::uniform(1, order), aux);
    ResidualDecomposition rd = substitute(o, inst, aux);
    std::vector<Sym> unknowns = inst.coeff_syms;
    for (Sym s : w.wave_params) unknowns.push_back(s);
    AlgSystem sys = extract_system(rd, unknowns);
    for (auto _ : state) {
        SolveResult res = solve_system(sys);
        benchmark::DoNotOptimize(res.families);
    }
}

void BM_verify(benchmark::State& state) {
    SolutionFixture f;
    f.name = "front";
    f.equation = kSecondOrder;
    f.solution = "1/2 + (1/2)*tanh(x/4 + (5/8)*t)";
    for (auto _ : state) {
        ResidualReport r = verify_fixture(f);
        benchmark::DoNotOptimize(r.zero);
    }
}

BENCHMARK_CAPTURE(BM_reduce, second_order, kSecondOrder);
BENCHMARK_CAPTURE(BM_reduce, fifth_order, kFifthOrder);
BENCHMARK_CAPTURE(BM_balance, fifth_order, kFifthOrder);
BENCHMARK_CAPTURE(BM_collect, second_order_m1, kSecondOrder, 1u);
BENCHMARK_CAPTURE(BM_collect, fifth_order_m4, kFifthOrder, 4u);
BENCHMARK_CAPTURE(BM_solve, second_order_m1, kSecondOrder, 1u);
BENCHMARK_CAPTURE(BM_solve, fifth_cubic_m2, kFifthCubic, 2u);
BENCHMARK(BM_verify);

} // namespace

BENCHMARK_MAIN();
