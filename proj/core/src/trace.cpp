#include "smartlet/trace.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace smartlet::engine {

using nlohmann::json;

json event_json(const Event& e) {
    json j = {{"type", "event"}, {"tick", e.tick}, {"event", e.name}, {"agents", e.agents}};
    for (const auto& [k, v] : e.extra.items()) j[k] = v;
    return j;
}

Event event_from_json(const json& j) {
    Event e;
    e.tick = j.at("tick").get<std::int64_t>();
    e.name = j.at("event").get<std::string>();
    e.agents = j.at("agents").get<std::vector<int>>();
    for (const auto& [k, v] : j.items())
        if (k != "type" && k != "tick" && k != "event" && k != "agents") e.extra[k] = v;
    return e;
}

TraceWriter::TraceWriter(std::ostream& out, const World& world) : out_(out) {
    const auto& s = world.scenario();
    json agents = json::array();
    for (const auto& a : world.agents()) agents.push_back({{"id", a.cfg.id}, {"name", a.cfg.name}});
    write({{"type", "header"},
           {"v", 1},
           {"scenario", s.name},
           {"seed", world.seed()},
           {"physics_dt_s", s.physicsDt},
           {"comm_dt_s", s.commDt},
           {"decimation", s.decimation},
           {"ticks", s.total_ticks()},
           {"agents", agents},
           {"source", s.source}});
    rebind(world);
}

void TraceWriter::rebind(const World& world) { eventCursor_ = world.events().size(); }

void TraceWriter::write(const json& j) {
    out_ << j.dump() << '\n';
    if (!out_) throw TraceIoError("trace write failed");
    ++records_;
}

void TraceWriter::after_step(const World& world) {
    const auto& ev = world.events();
    for (; eventCursor_ < ev.size(); ++eventCursor_) write(event_json(ev[eventCursor_]));
    if (!world.agents().empty() && world.tick() % world.scenario().decimation == 0) write(world.snapshot());
}

void TraceWriter::command(std::int64_t tick, const json& msg) {
    write({{"type", "command"}, {"tick", tick}, {"msg", msg}});
}

void TraceWriter::end(std::int64_t steps, std::int64_t tick) {
    write({{"type", "end"}, {"steps", steps}, {"tick", tick}});
}

void TraceWriter::flush() {
    out_.flush();
    if (!out_) throw TraceIoError("trace flush failed");
}

std::vector<json> read_trace(std::istream& in) {
    std::vector<json> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw TraceIoError("trace line " + std::to_string(n) + ": " + e.what());
        }
    }
    if (in.bad()) throw TraceIoError("trace read failed");
    return out;
}

std::vector<json> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceIoError("cannot open trace '" + path + "'");
    return read_trace(in);
}

std::vector<Event> trace_events(const std::vector<json>& records) {
    std::vector<Event> out;
    for (const auto& r : records)
        if (r.value("type", "") == "event") out.push_back(event_from_json(r));
    return out;
}

std::uint64_t trace_hash(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Applied apply_recorded(std::unique_ptr<World>& world, const json& msg, const RunOptions& opt) {
    try {
        const std::string type = msg.is_object() ? msg.value("type", "") : "";
        if (type == "control") {
            if (msg.value("action", "") != "reset") return {false, "only reset is recordable"};
            world = std::make_unique<World>(world->scenario(), world->seed(), opt.threads);
            return {true, {}};
        }
        world->apply_message(msg);
        return {true, {}};
    } catch (const ProtocolViolation& e) {
        return {true, e.what()};  // rejected, but the violation event is part of the record
    } catch (const Error& e) {
        return {false, e.what()};
    } catch (const json::exception& e) {
        return {false, e.what()};
    }
}

RunSummary run_scenario(const Scenario& scenario, std::ostream& trace, const RunOptions& opt,
                        const std::vector<ScriptedCommand>& script) {
    auto world = std::make_unique<World>(scenario, opt.seed, opt.threads);
    TraceWriter writer(trace, *world);
    const std::int64_t ticks = opt.ticks.value_or(scenario.total_ticks());
    std::size_t cursor = 0;
    std::int64_t elapsed = 0;
    auto apply_due = [&] {
        for (; cursor < script.size() && script[cursor].tick <= world->tick(); ++cursor) {
            const json& msg = script[cursor].msg;
            const std::int64_t at = world->tick();
            const bool reset = msg.is_object() && msg.value("action", "") == "reset";
            if (!apply_recorded(world, msg, opt).recorded) continue;
            writer.command(at, msg);
            if (reset) writer.rebind(*world);
        }
    };
    try {
        for (; elapsed < ticks; ++elapsed) {
            apply_due();
            world->step();
            writer.after_step(*world);
            if (opt.observer) opt.observer(*world);
        }
        apply_due();
        if (elapsed != scenario.total_ticks()) writer.end(elapsed, world->tick());
        writer.flush();
    } catch (const TraceIoError&) {
        trace.clear();
        trace.flush();
        throw;
    }
    return {elapsed, world->events().size(), writer.records()};
}

Replay replay_plan(const std::vector<json>& records) {
    if (records.empty() || records.front().value("type", "") != "header")
        throw TraceIoError("trace has no header record");
    const json& h = records.front();
    Replay r;
    try {
        r.scenario = scenario_from_json(h.at("source"), "<trace header>");
        r.seed = h.at("seed").get<std::uint64_t>();
        r.ticks = h.at("ticks").get<std::int64_t>();
    } catch (const json::exception& e) {
        throw TraceIoError(std::string("bad trace header: ") + e.what());
    }
    try {
        for (const auto& rec : records) {
            const std::string type = rec.value("type", "");
            if (type == "command") r.script.push_back({rec.at("tick").get<std::int64_t>(), rec.at("msg")});
            if (type == "end") r.ticks = rec.at("steps").get<std::int64_t>();
        }
    } catch (const json::exception& e) {
        throw TraceIoError(std::string("bad trace record: ") + e.what());
    }
    return r;
}

}  // namespace smartlet::engine
