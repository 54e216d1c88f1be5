#include <benchmark/benchmark.h>

#include "smartlet/lablet_fsm.hpp"

using namespace smartlet::fsm;

namespace {

void BM_FsmTick(benchmark::State& st) {
    const LabletProgram p = canonical_dive_program();
    FsmState s = receive_command(installed(p), command::Start).state;
    for (auto _ : st) {
        s = tick(s, p).state;
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_FsmTick);

void BM_FsmLoadProgram(benchmark::State& st) {
    const std::uint64_t w = serialize(canonical_dive_program());
    for (auto _ : st) {
        FsmState s;
        for (int i = kProgramBits - 1; i >= 0; --i) s = load_bit(s, (w >> i) & 1u).state;
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_FsmLoadProgram);

void BM_SerializeRoundTrip(benchmark::State& st) {
    const LabletProgram p = canonical_dive_program();
    for (auto _ : st) benchmark::DoNotOptimize(deserialize(serialize(p)));
}
BENCHMARK(BM_SerializeRoundTrip);

}  // namespace
