#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smartlet/trace.hpp"

namespace smartlet::tools {

// Owns the live world for the WebSocket service. Not thread-safe: the
// transport funnels every call through one ordered executor.
class ControlService {
public:
    struct Output {
        std::vector<std::string> reply;      // to the sending connection only
        std::vector<std::string> broadcast;  // to every connection
    };

    static constexpr double kMaxSnapshotRate = 30.0;  // per wall second

    ControlService(engine::Scenario scenario, engine::RunOptions options, std::ostream* trace = nullptr);

    // One inbound text frame. `index` is the connection's message counter,
    // used as the ack ref when the client supplies no "id".
    Output handle(const std::string& text, std::uint64_t index);

    // Advance by wall-clock time while running; emits events and at most one snapshot.
    std::vector<std::string> advance(double wallSeconds);

    std::string snapshot() const;
    bool paused() const { return paused_; }
    double speed() const { return speed_; }
    std::int64_t tick() const { return world_->tick(); }
    std::int64_t steps() const { return steps_; }
    const engine::World& world() const { return *world_; }

    // Writes the closing trace record; idempotent.
    void finish();

private:
    void step_once(std::vector<std::string>& out);
    void drain_events(std::vector<std::string>& out);
    std::int64_t stride() const { return world_->scenario().decimation; }

    engine::RunOptions options_;
    std::unique_ptr<engine::World> world_;
    std::unique_ptr<engine::TraceWriter> writer_;
    std::size_t eventCursor_ = 0;
    std::int64_t steps_ = 0;
    bool paused_ = true;
    bool finished_ = false;
    double speed_ = 1.0;
    double simBacklog_ = 0;     // s of simulated time owed
    double sinceSnapshot_ = 1;  // wall s since the last streamed snapshot
};

}  // namespace smartlet::tools
