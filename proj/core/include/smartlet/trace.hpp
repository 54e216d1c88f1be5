#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "smartlet/world.hpp"

namespace smartlet::engine {

nlohmann::json event_json(const Event& e);
Event event_from_json(const nlohmann::json& j);

// JSONL trace sink. Records: header, event, state, command.
class TraceWriter {
public:
    TraceWriter(std::ostream& out, const World& world);  // writes the header

    // Events logged since the previous call, then a state record on decimation ticks.
    void after_step(const World& world);
    void command(std::int64_t tick, const nlohmann::json& msg);
    // Closing record, written only when the step count differs from the header's.
    void end(std::int64_t steps, std::int64_t tick);
    // Call after a world reset so event indices start over.
    void rebind(const World& world);
    void flush();

    std::size_t records() const { return records_; }

private:
    void write(const nlohmann::json& j);

    std::ostream& out_;
    std::size_t eventCursor_ = 0;
    std::size_t records_ = 0;
};

// Throws TraceIoError on unreadable or non-JSON lines.
std::vector<nlohmann::json> read_trace(std::istream& in);
std::vector<nlohmann::json> read_trace_file(const std::string& path);
std::vector<Event> trace_events(const std::vector<nlohmann::json>& records);

// FNV-1a 64.
std::uint64_t trace_hash(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

// A client message to apply before the step that starts at `tick`.
struct ScriptedCommand {
    std::int64_t tick = 0;
    nlohmann::json msg;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::optional<std::int64_t> ticks;  // default: scenario duration
    std::function<void(const World&)> observer;  // after every step
};

struct RunSummary {
    std::int64_t ticks = 0;
    std::size_t events = 0;
    std::size_t records = 0;
};

// Outcome of applying one inbound message: `recorded` when it changed the world.
struct Applied {
    bool recorded = false;
    std::string error;
};

// Applies a command/program/control(reset) message; never throws for bad input.
Applied apply_recorded(std::unique_ptr<World>& world, const nlohmann::json& msg, const RunOptions& opt);

// Headless run. Script entries must be sorted by tick.
RunSummary run_scenario(const Scenario& scenario, std::ostream& trace, const RunOptions& opt = {},
                        const std::vector<ScriptedCommand>& script = {});

// Rebuilds the scenario, seed and command script from a trace and re-runs it.
struct Replay {
    Scenario scenario;
    std::uint64_t seed = 0;
    std::int64_t ticks = 0;  // steps to run
    std::vector<ScriptedCommand> script;
};
Replay replay_plan(const std::vector<nlohmann::json>& records);

}  // namespace smartlet::engine
