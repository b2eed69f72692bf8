#include <benchmark/benchmark.h>

#include "canproj/formmatrix.hpp"
#include "canproj/hilbert.hpp"

using namespace canproj;

namespace {

RingPtr bench_ring() {
    static RingPtr r = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::prime(31991));
    return r;
}

std::vector<Poly<Fp>> seeded_gens(unsigned seed, int count, long max_deg) {
    auto r = bench_ring();
    Rng rng(seed);
    std::vector<Poly<Fp>> gens;
    for (int i = 0; i < count; ++i)
        gens.push_back(random_homogeneous<Fp>(r, 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(max_deg))), rng));
    return gens;
}

} // namespace

static void BM_groebner(benchmark::State& state) {
    auto gens = seeded_gens(17, 3, 3);
    for (auto _ : state) {
        Ideal<Fp> i(bench_ring(), gens);
        auto gb = i.groebner(MonomialOrder::grevlex());
        benchmark::DoNotOptimize(gb->elements.size());
    }
}
BENCHMARK(BM_groebner);

static void BM_normal_form(benchmark::State& state) {
    auto gens = seeded_gens(17, 3, 3);
    Ideal<Fp> i(bench_ring(), gens);
    auto gb = i.groebner(MonomialOrder::grevlex());
    Rng rng(23);
    auto f = random_homogeneous<Fp>(bench_ring(), 6, rng);
    for (auto _ : state) {
        auto nf = normal_form(f, *gb);
        benchmark::DoNotOptimize(nf.term_count());
    }
}
BENCHMARK(BM_normal_form);

static void BM_hilbert(benchmark::State& state) {
    auto gens = seeded_gens(29, 3, 3);
    for (auto _ : state) {
        Ideal<Fp> i(bench_ring(), gens);
        auto h = hilbert(i);
        benchmark::DoNotOptimize(h.degree);
    }
}
BENCHMARK(BM_hilbert);

static void BM_determinant(benchmark::State& state) {
    auto r = bench_ring();
    Rng rng(31);
    GradedFreeModule tgt = GradedFreeModule::of_rank1(r, {0, 0, 0, 0});
    GradedFreeModule src = GradedFreeModule::of_rank1(r, {-2, -2, -2, -2});
    auto a = FormMatrix<Fp>::zero(src, tgt);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) a.entry_mut(i, j) = random_homogeneous<Fp>(r, 2, rng, false);
    for (auto _ : state) {
        auto d = determinant(a);
        benchmark::DoNotOptimize(d.term_count());
    }
}
BENCHMARK(BM_determinant);

BENCHMARK_MAIN();
