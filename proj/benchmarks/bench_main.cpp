#include <random>

#include <benchmark/benchmark.h>

#include "sidon/certify.hpp"
#include "sidon/orbit_code.hpp"
#include "sidon/presets.hpp"

using namespace sidon;

namespace {

TowerPtr plain(std::uint32_t p, std::size_t n) {
    return std::make_shared<const FieldTower>(FieldTower::make(p, std::vector<std::size_t>{n}, 0));
}

FieldElement random_element(const FieldTower& t, std::mt19937_64& rng) {
    std::vector<Coeff> c(t.level(t.top()).flat_degree);
    for (auto& x : c) x = static_cast<Coeff>(rng() % t.characteristic());
    return t.element(t.top(), c);
}

PresetResult preset(const char* name, std::uint64_t q, std::size_t k, std::size_t n) {
    PresetParams p;
    p.q = q;
    p.k = k;
    p.n = n;
    return run_preset(name, p);
}

void BM_FieldMul(benchmark::State& state) {
    const auto t = plain(static_cast<std::uint32_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    std::mt19937_64 rng(1);
    FieldElement a = random_element(*t, rng);
    const FieldElement b = random_element(*t, rng);
    for (auto _ : state) {
        a = t->mul(a, b);
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_FieldMul)->Args({2, 12})->Args({2, 78})->Args({3, 6})->Args({3, 40});

void BM_TowerMul(benchmark::State& state) {
    const PresetResult r = preset("lemma_4_1", 2, 6, 78);
    const FieldTower& t = *r.tower;
    std::mt19937_64 rng(2);
    FieldElement a = random_element(t, rng);
    const FieldElement b = random_element(t, rng);
    for (auto _ : state) {
        a = t.mul(a, b);
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_TowerMul);

void BM_SpanRref(benchmark::State& state) {
    const auto t = plain(2, static_cast<std::size_t>(state.range(0)));
    std::mt19937_64 rng(3);
    std::vector<FieldElement> gens;
    for (int i = 0; i < state.range(1); ++i) gens.push_back(random_element(*t, rng));
    for (auto _ : state) benchmark::DoNotOptimize(Subspace::span(t, gens));
}
BENCHMARK(BM_SpanRref)->Args({42, 5})->Args({78, 12})->Args({200, 20});

void BM_IsSidon(benchmark::State& state) {
    const PresetResult r = preset("lemma_4_1", 2, static_cast<std::size_t>(state.range(0)), 4 * state.range(0));
    const Subspace& v = r.spaces.at(0).realized.space;
    Budgets b;
    b.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(is_sidon(v, b));
}
BENCHMARK(BM_IsSidon)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_OrbitSweep(benchmark::State& state) {
    const PresetResult r = preset("lemma_4_1", 2, 3, static_cast<std::size_t>(state.range(0)));
    const Subspace& v = r.spaces.at(0).realized.space;
    Budgets b;
    b.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_orbit(v, b));
}
BENCHMARK(BM_OrbitSweep)->Arg(12)->Arg(15)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
