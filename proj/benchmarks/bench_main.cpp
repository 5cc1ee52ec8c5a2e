#include <benchmark/benchmark.h>

#include "karnrto/limitwit.hpp"
#include "karnrto/netsim.hpp"
#include "karnrto/rtocalc.hpp"
#include "karnrto/scenario.hpp"
#include "karnrto/steadystate.hpp"

namespace {

using namespace karnrto;

rtocalc::RtoParams rfc_params() {
    return rtocalc::make_params(Rational(1, 8), Rational(1, 4), Rational(1));
}

void BM_PowLessExact(benchmark::State& state) {
    const Rational a(Integer(999), Integer(1000));
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pow_less(a, n, Rational(Integer(1), Integer(1000))));
    }
}
BENCHMARK(BM_PowLessExact)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_PowLessEnclosure(benchmark::State& state) {
    const Rational a(Integer(999999), Integer(1000000));
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pow_less(a, n, Rational(Integer(1), Integer(1000000))));
    }
}
BENCHMARK(BM_PowLessEnclosure)->Arg(10'000'000)->Arg(1'000'000'000);

void BM_CeilingWitness(benchmark::State& state) {
    const Rational a(Integer(state.range(0) - 1), Integer(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(limitwit::ceiling_delta(a, Rational(Integer(1), Integer(1000))));
    }
}
BENCHMARK(BM_CeilingWitness)->Arg(10)->Arg(1000)->Arg(100000);

void BM_BinomialWitness(benchmark::State& state) {
    const Rational a(Integer(state.range(0) - 1), Integer(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(limitwit::binomial_delta(a, Rational(Integer(1), Integer(1000))));
    }
}
BENCHMARK(BM_BinomialWitness)->Arg(10)->Arg(1000)->Arg(100000);

void BM_RtoRunPathological(benchmark::State& state) {
    const scenario::ScenarioSpec spec{scenario::Pathological{},
                                      static_cast<std::uint64_t>(state.range(0)), rfc_params()};
    const auto samples = scenario::generate(spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rtocalc::run(spec.params, samples));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RtoRunPathological)->Arg(100)->Arg(1000);

void BM_SrttBounds(benchmark::State& state) {
    const steadystate::SteadySpec spec{Rational(135, 2), Rational(15, 2), rfc_params(),
                                       Rational(60), Rational(4)};
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(steadystate::srtt_bounds(spec, n));
    }
}
BENCHMARK(BM_SrttBounds)->Arg(10)->Arg(1000);

void BM_Simulation(benchmark::State& state) {
    netsim::ChannelConfig cfg;
    cfg.drop_prob = 0.1;
    cfg.dup_prob = 0.1;
    cfg.min_delay = 1;
    cfg.max_delay = 8;
    cfg.seed = 7;
    netsim::WindowPolicy pol;
    pol.window = 4;
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(netsim::run_simulation(cfg, n, rfc_params(), pol));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulation)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
