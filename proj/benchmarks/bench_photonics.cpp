#include <benchmark/benchmark.h>

#include "smartlet/photonics.hpp"

using namespace smartlet::photonics;

namespace {

void BM_DomeSweep(benchmark::State& st) {
    const SeriesString s = st.range(0) ? folded_cube_string() : prefolded_string();
    for (auto _ : st) benchmark::DoNotOptimize(dome_sweep(s));
}
BENCHMARK(BM_DomeSweep)->Arg(0)->Arg(1);

void BM_StringPower(benchmark::State& st) {
    const SeriesString s = folded_cube_string();
    const LightEnvironment env{{{SourceKind::Sun, dome_direction(30, 40), kOneSun}}};
    for (auto _ : st) benchmark::DoNotOptimize(string_power(s, env));
}
BENCHMARK(BM_StringPower);

}  // namespace
