#include <benchmark/benchmark.h>

#include <random>

#include "smartlet/manchester.hpp"
#include "smartlet/ws2812.hpp"

using namespace smartlet::codec;

namespace {

Bits random_bits(std::size_t n) {
    std::mt19937_64 rng(1);
    Bits b(n);
    for (auto&& x : b) x = rng() & 1u;
    return b;
}

void BM_ManchesterEncode(benchmark::State& st) {
    const Bits b = random_bits(static_cast<std::size_t>(st.range(0)));
    const ManchesterParams p;
    for (auto _ : st) benchmark::DoNotOptimize(manchester_encode(b, p));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ManchesterEncode)->Arg(58)->Arg(1024);

void BM_ManchesterDecode(benchmark::State& st) {
    const ManchesterParams p;
    const PulseTrain t = manchester_encode(random_bits(static_cast<std::size_t>(st.range(0))), p);
    for (auto _ : st) benchmark::DoNotOptimize(manchester_decode(t, p));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ManchesterDecode)->Arg(58)->Arg(1024);

void BM_Ws2812RoundTrip(benchmark::State& st) {
    std::vector<Pixel> px(static_cast<std::size_t>(st.range(0)), Pixel{0x12, 0x34, 0x56});
    for (auto _ : st) benchmark::DoNotOptimize(ws2812_decode(ws2812_encode(px)));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Ws2812RoundTrip)->Arg(1)->Arg(8)->Arg(64);

void BM_Ws2812Cascade(benchmark::State& st) {
    const PulseTrain t = ws2812_encode(std::vector<Pixel>(8, Pixel{1, 2, 3}));
    for (auto _ : st) benchmark::DoNotOptimize(ws2812_cascade(t));
}
BENCHMARK(BM_Ws2812Cascade);

}  // namespace
