#pragma once

// Helpers shared by the unit suites and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smartlet/lablet_fsm.hpp"
#include "smartlet/manchester.hpp"
#include "smartlet/optical_link.hpp"
#include "smartlet/trace.hpp"
#include "smartlet/ws2812.hpp"

namespace support {

using namespace smartlet;

// Sends a framed START at `rateHz` across `distanceMm` of water, samples the
// μOPD through its low-pass every `dt` seconds, and reports whether a
// receiver tuned to `rateHz` recovers the command.
inline bool link_delivers(double rateHz, double distanceMm, double dt = 1e-4) {
    const photonics::OpticalLinkParams link;
    const photonics::Emitter em{{0, 0, 0}, {1, 0, 0}, true};
    const photonics::Receiver rx{{distanceMm * 1e-3, 0, 0}, {-1, 0, 0}};
    const double vOn = photonics::opd_voltage(link, photonics::link_irradiance(link, em, rx));

    codec::ManchesterParams mp;
    mp.bitRate = rateHz;
    const codec::PulseTrain tx = codec::encode_frame(codec::command_frame(fsm::command::Start), mp);
    codec::ManchesterReceiver receiver(mp, codec::ManchesterReceiver::Mode::Framed);
    photonics::OpdFilter filter(link);

    const auto dtNs = static_cast<codec::Nanos>(std::llround(dt * 1e9));
    const codec::Nanos end = tx.duration + 4 * mp.nominal_period();
    for (codec::Nanos t = 0; t <= end; t += dtNs) {
        const bool on = t < tx.duration && tx.level_at(t) == codec::Line::High;
        filter.step(on ? vOn : 0.0, dt);
        receiver.sample(t, filter.digital() ? codec::Line::High : codec::Line::Low);
    }
    receiver.idle_until(end + 4 * mp.nominal_period());
    for (const auto& ev : receiver.drain())
        if (ev.kind == codec::ManchesterReceiver::Event::Kind::Frame && ev.frame.type == codec::FrameType::Command &&
            codec::payload_value(ev.frame.payload) == fsm::command::Start)
            return true;
    return false;
}

// Runs a scenario headlessly and returns the events of its trace.
inline std::vector<engine::Event> run_events(const engine::Scenario& sc, std::optional<std::uint64_t> seed = {},
                                             int threads = 1, std::string* traceOut = nullptr) {
    std::ostringstream out;
    engine::RunOptions opt;
    opt.seed = seed;
    opt.threads = threads;
    engine::run_scenario(sc, out, opt);
    if (traceOut) *traceOut = out.str();
    std::istringstream in(out.str());
    return engine::trace_events(engine::read_trace(in));
}

inline std::vector<engine::Event> for_agent(const std::vector<engine::Event>& evs, int id) {
    std::vector<engine::Event> out;
    for (const auto& e : evs)
        if (std::find(e.agents.begin(), e.agents.end(), id) != e.agents.end()) out.push_back(e);
    return out;
}

// First tick >= `from` at which agent `id` logged `name`, or -1.
inline std::int64_t first(const std::vector<engine::Event>& evs, int id, const std::string& name,
                          std::int64_t from = 0) {
    for (const auto& e : evs)
        if (e.name == name && e.tick >= from && std::find(e.agents.begin(), e.agents.end(), id) != e.agents.end())
            return e.tick;
    return -1;
}

// BgeOn ≺ Levitate ≺ SurfaceReached ≺ BgeOff ≺ SinkStart ≺ FloorReached for the first cycle.
inline bool dive_order(const std::vector<engine::Event>& evs, int id) {
    static const char* kOrder[] = {"BgeOn", "Levitate", "SurfaceReached", "BgeOff", "SinkStart", "FloorReached"};
    std::int64_t prev = 0;
    for (const char* name : kOrder) {
        const std::int64_t t = first(evs, id, name, prev);
        if (t < 0) return false;
        prev = t;
    }
    return true;
}

inline int count(const std::vector<engine::Event>& evs, int id, const std::string& name, std::int64_t before) {
    int n = 0;
    for (const auto& e : evs)
        if (e.name == name && e.tick < before && std::find(e.agents.begin(), e.agents.end(), id) != e.agents.end())
            ++n;
    return n;
}

}  // namespace support
