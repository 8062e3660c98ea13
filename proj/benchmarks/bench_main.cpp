#include <benchmark/benchmark.h>

#include "symschrod/detsys.hpp"
#include "symschrod/killing.hpp"
#include "symschrod/lie.hpp"
#include "symschrod/third_order.hpp"

using namespace symschrod;

namespace {

LaurentPoly cubic_potential(std::size_t dim) {
    LaurentPoly p(dim + 1);
    int sign = 1;
    for (std::size_t a = 1; a <= dim; ++a) {
        p += LaurentPoly::variable(dim + 1, a, 3).scale(GaussianRational(Rational(sign, 2)));
        p += LaurentPoly::variable(dim + 1, a, 1).scale(GaussianRational(Rational(2, 3)));
        sign = -sign;
    }
    return p;
}

void BM_poly_mul(benchmark::State& state) {
    LaurentPoly a(3), b(3);
    std::uint64_t s = 7;
    auto next = [&s] { s ^= s << 13; s ^= s >> 7; s ^= s << 17; return s; };
    for (int k = 0; k < 25; ++k) {
        Monomial m(3);
        for (int v = 0; v < 3; ++v) m.exps[v] = static_cast<int>(next() % 7) - 3;
        a.add_term(m, GaussianRational(Rational(static_cast<std::int64_t>(next() % 9) - 4,
                                                static_cast<std::int64_t>(next() % 4) + 1)));
        for (int v = 0; v < 3; ++v) m.exps[v] = static_cast<int>(next() % 7) - 3;
        b.add_term(m, GaussianRational(Rational(static_cast<std::int64_t>(next() % 9) - 4, 3)));
    }
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_poly_mul);

void BM_commutator_with_L(benchmark::State& state) {
    const std::size_t m = static_cast<std::size_t>(state.range(0));
    DiffOp l = build_L(m, Rational(1), cubic_potential(m));
    SymTensorField k(2, m);
    for (const auto& idx : sorted_multi_indices(2, m))
        k.set_component(idx, LaurentPoly::variable(m + 1, idx[0], 2));
    DiffOp q = nested_anticommutator(k);
    for (auto _ : state) benchmark::DoNotOptimize(commutator_with_L(l, q));
}
BENCHMARK(BM_commutator_with_L)->Arg(1)->Arg(2)->Arg(3);

void BM_oracle_comparison(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    AnsatzBounds bounds;
    bounds.x_degree.assign(n + 1, 3);
    bounds.t_degree.assign(n + 1, 3);
    LaurentPoly v = cubic_potential(1);
    for (auto _ : state) {
        UnknownBasis basis(n, 1, bounds);
        DetSystem sys = generate_det_system(n, 1, false);
        auto cmp = compare_solution_spaces(instantiate(sys, basis, v),
                                           oracle_system(n, 1, basis, v));
        benchmark::DoNotOptimize(cmp);
    }
}
BENCHMARK(BM_oracle_comparison)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_solve_free(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const std::size_t m = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(solve_free(n, m));
}
BENCHMARK(BM_solve_free)->Args({1, 1})->Args({2, 1})->Args({2, 2})->Unit(benchmark::kMillisecond);

void BM_check_row(benchmark::State& state) {
    for (auto _ : state) {
        auto rep = check_row("2.8", static_cast<int>(state.range(0)), {}, 25, 42, 1e-9);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_check_row)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_painleve_pipeline(benchmark::State& state) {
    PotentialFamily fam;
    fam.id = FamilyId::P214;
    fam.omega2 = Rational(1);
    std::vector<double> grid(20);
    for (int i = 0; i < 20; ++i) grid[i] = i / 19.0;
    for (auto _ : state) {
        OdeSolution sol = ode_integrate(fam, 0.0, 1.0, {0.0, 0.0}, 20, 1e-12);
        benchmark::DoNotOptimize(numeric_verify(fam, sol, grid, 1e-8, operator_coeffs(fam)));
    }
}
BENCHMARK(BM_painleve_pipeline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
