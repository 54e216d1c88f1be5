#include <benchmark/benchmark.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "smartlet/trace.hpp"
#include "smartlet/world.hpp"

using namespace smartlet::engine;
using nlohmann::json;

namespace {

// n dive-programmed agents on a grid, all started by one global command.
Scenario swarm(int n) {
    json agents = json::array();
    for (int i = 0; i < n; ++i)
        agents.push_back({{"id", i},
                          {"position_mm", {2.0 + 4.0 * (i % 10), 2.0 + 4.0 * (i / 10 % 10), 0.5}},
                          {"program", "0000111111111011110010000000000001110010000000000001110010"}});
    return scenario_from_json({{"duration_s", 3600},
                               {"agents", agents},
                               {"schedule", {{{"t_s", 0.01}, {"payload", "START"}, {"duration_s", 0.2}}}}});
}

void BM_WorldStep(benchmark::State& st) {
    World w(swarm(static_cast<int>(st.range(0))), 1, static_cast<int>(st.range(1)));
    for (auto _ : st) w.step();
    st.SetItemsProcessed(st.iterations());
    st.counters["agents"] = static_cast<double>(st.range(0));
}
BENCHMARK(BM_WorldStep)->Args({2, 1})->Args({20, 1})->Args({100, 1})->Args({100, 4});

void BM_RunWithTrace(benchmark::State& st) {
    const Scenario sc = swarm(10);
    RunOptions opt;
    opt.ticks = 10000;
    for (auto _ : st) {
        std::ostringstream out;
        run_scenario(sc, out, opt);
        benchmark::DoNotOptimize(out.str().size());
    }
}
BENCHMARK(BM_RunWithTrace)->Unit(benchmark::kMillisecond);

}  // namespace
