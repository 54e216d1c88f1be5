#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smartlet/manchester.hpp"
#include "smartlet/rng.hpp"
#include "smartlet/scenario.hpp"

namespace smartlet::engine {

struct Event {
    std::int64_t tick = 0;
    std::string name;
    std::vector<int> agents;
    nlohmann::json extra = nlohmann::json::object();
};

// A Manchester frame repeated back-to-back from `start`.
struct Transmission {
    codec::PulseTrain frame;
    codec::Nanos start = 0;
    codec::Nanos period = 0;  // frame + idle gap
    int repeats = 1;

    codec::Nanos end() const { return start + period * (repeats - 1) + frame.duration; }
    bool high(codec::Nanos t) const;
};

Transmission make_transmission(const Payload& payload, double rateHz, double duration, codec::Nanos start);

struct Agent {
    AgentConfig cfg;
    aquatics::SmartletBody body;
    fsm::FsmState fsm;
    fsm::LabletProgram program;  // cached latched program
    codec::ManchesterReceiver rx;
    std::array<photonics::OpdFilter, 2> opd;
    std::array<bool, 2> opdDigital{false, false};
    std::deque<Transmission> tx;
    bool green = false, red = false, bge = false;
    bool powered = true;
    photonics::StringOutput harvest;
    double bgeCurrent = 0;
    codec::Nanos nextFsmTick = 0;
    std::vector<int> bonds;

    Agent(const AgentConfig& c, const Scenario& s);
    codec::Nanos clock_period() const;
};

struct Bond {
    int a = 0, b = 0;
    Face faceA = Face::PosX, faceB = Face::NegX;
    aquatics::Offset offset = aquatics::Offset::Full;
    int score = 0;
    double strength = 0;  // N
};

class World {
public:
    explicit World(Scenario scenario, std::optional<std::uint64_t> seed = std::nullopt, int threads = 1);
    ~World();
    World(const World&) = delete;
    World& operator=(const World&) = delete;

    // One physics tick, including its comm sub-steps.
    void step();
    void run_ticks(std::int64_t n);

    std::int64_t tick() const { return tick_; }
    double time() const;
    codec::Nanos now_ns() const { return tick_ * physicsNs_; }
    bool done() const { return tick_ >= scenario_.total_ticks(); }
    std::uint64_t seed() const { return seed_; }
    int threads() const { return threads_; }
    const Scenario& scenario() const { return scenario_; }

    const std::vector<Agent>& agents() const { return agents_; }
    Agent& agent(int id);  // throws ConfigError
    const Agent& agent(int id) const;
    const std::vector<Bond>& bonds() const { return bonds_; }
    const std::vector<Event>& events() const { return events_; }

    // rate ∈ [1, 1000] Hz or ConfigError; zero duration is a no-op.
    void inject_global_light(const Payload& payload, double rateHz, double duration);
    void inject_agent_light(int id, const Payload& payload, double rateHz, double duration);
    // Serial load of 58 bits at the next tick boundary; ProtocolViolation when busy.
    void program_agent(int id, std::uint64_t word);
    // Wire-protocol "command" / "program" message; throws ConfigError/ProtocolViolation.
    void apply_message(const nlohmann::json& msg);

    void set_suns(std::vector<photonics::LightSource> suns);
    // Re-evaluate wiring after an external FSM edit (tests, hand-driven FSMs).
    void refresh_outputs(int id);

    nlohmann::json snapshot() const;

private:
    void log(std::string name, std::vector<int> agents, nlohmann::json extra = nlohmann::json::object());
    void apply_schedule();
    void comm_substep(codec::Nanos t);
    bool quiet(codec::Nanos t) const;
    void sense(Agent& a, codec::Nanos t, bool globalOn);
    void deliver(Agent& a, const codec::ManchesterReceiver::Event& ev);
    void after_fsm(Agent& a, const fsm::FsmState& before, std::uint32_t signals);
    void update_wiring(Agent& a);
    void clock_fsms(codec::Nanos t);
    void physics();
    void update_bonds(const std::vector<double>& verticalForce);
    std::vector<int> clusters() const;
    void recompute_power(Agent& a);

    struct Pool;

    Scenario scenario_;
    std::uint64_t seed_;
    int threads_;
    std::unique_ptr<Pool> pool_;
    std::int64_t tick_ = 0;
    bool inStep_ = false;
    codec::Nanos physicsNs_;
    codec::Nanos commNs_;
    int commSteps_;
    std::size_t scheduleCursor_ = 0;
    std::vector<Agent> agents_;
    std::vector<Bond> bonds_;
    std::vector<Transmission> global_;
    std::vector<Event> events_;
    photonics::SeriesString string_;
};

}  // namespace smartlet::engine
