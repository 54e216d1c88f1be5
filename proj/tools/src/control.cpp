#include "control.hpp"

#include <algorithm>
#include <cmath>

namespace smartlet::tools {

using nlohmann::json;

namespace {

std::string ack(const json& ref) { return json{{"type", "ack"}, {"ref", ref}}.dump(); }

std::string error(const json& ref, const std::string& msg) {
    json j = {{"type", "error"}, {"msg", msg}};
    if (!ref.is_null()) j["ref"] = ref;
    return j.dump();
}

constexpr std::int64_t kMaxStepsPerAdvance = 20000;

}  // namespace

ControlService::ControlService(engine::Scenario scenario, engine::RunOptions options, std::ostream* trace)
    : options_(options), world_(std::make_unique<engine::World>(std::move(scenario), options.seed, options.threads)) {
    if (trace) writer_ = std::make_unique<engine::TraceWriter>(*trace, *world_);
}

std::string ControlService::snapshot() const { return world_->snapshot().dump(); }

void ControlService::drain_events(std::vector<std::string>& out) {
    const auto& ev = world_->events();
    for (; eventCursor_ < ev.size(); ++eventCursor_) out.push_back(engine::event_json(ev[eventCursor_]).dump());
}

void ControlService::step_once(std::vector<std::string>& out) {
    world_->step();
    ++steps_;
    if (writer_) writer_->after_step(*world_);
    drain_events(out);
}

ControlService::Output ControlService::handle(const std::string& text, std::uint64_t index) {
    Output out;
    json msg;
    try {
        msg = json::parse(text);
    } catch (const json::exception& e) {
        out.reply.push_back(error(nullptr, std::string("malformed JSON: ") + e.what()));
        return out;
    }
    if (!msg.is_object()) {
        out.reply.push_back(error(nullptr, "message must be a JSON object"));
        return out;
    }
    const json ref = msg.contains("id") ? msg.at("id") : json(index);
    if (msg.contains("v") && msg.at("v") != 1) {
        out.reply.push_back(error(ref, "unsupported protocol version"));
        return out;
    }
    const std::string type = msg.contains("type") && msg.at("type").is_string() ? msg.at("type").get<std::string>() : "";

    if (type == "control") {
        const std::string action =
            msg.contains("action") && msg.at("action").is_string() ? msg.at("action").get<std::string>() : "";
        if (action == "pause") {
            paused_ = true;
        } else if (action == "resume") {
            if (finished_) {
                out.reply.push_back(error(ref, "session finished"));
                return out;
            }
            paused_ = false;
            simBacklog_ = 0;
        } else if (action == "step") {
            if (finished_) {
                out.reply.push_back(error(ref, "session finished"));
                return out;
            }
            out.reply.push_back(ack(ref));
            for (std::int64_t i = 0; i < stride(); ++i) step_once(out.broadcast);
            out.broadcast.push_back(snapshot());
            return out;
        } else if (action == "speed") {
            if (!msg.contains("value") || !msg.at("value").is_number() || !(msg.at("value").get<double>() > 0)) {
                out.reply.push_back(error(ref, "speed needs a positive numeric 'value'"));
                return out;
            }
            speed_ = msg.at("value").get<double>();
        } else if (action == "reset") {
            if (finished_) {
                out.reply.push_back(error(ref, "session finished"));
                return out;
            }
            if (writer_) writer_->command(world_->tick(), msg);
            engine::apply_recorded(world_, msg, options_);
            if (writer_) writer_->rebind(*world_);
            eventCursor_ = 0;
            paused_ = true;
            out.reply.push_back(ack(ref));
            out.broadcast.push_back(snapshot());
            return out;
        } else {
            out.reply.push_back(error(ref, "unknown control action '" + action + "'"));
            return out;
        }
        out.reply.push_back(ack(ref));
        return out;
    }

    if (type != "command" && type != "program") {
        out.reply.push_back(error(ref, "unsupported message type '" + type + "'"));
        return out;
    }
    if (finished_) {
        out.reply.push_back(error(ref, "session finished"));
        return out;
    }
    // Strip transport-only fields so the recorded message replays byte-identically.
    json applied = msg;
    applied.erase("id");
    const std::int64_t at = world_->tick();
    const engine::Applied r = engine::apply_recorded(world_, applied, options_);
    if (r.recorded && writer_) writer_->command(at, applied);
    drain_events(out.broadcast);
    if (r.error.empty())
        out.reply.push_back(ack(ref));
    else
        out.reply.push_back(error(ref, r.error));
    return out;
}

std::vector<std::string> ControlService::advance(double wallSeconds) {
    std::vector<std::string> out;
    if (paused_ || finished_) return out;
    sinceSnapshot_ += wallSeconds;
    simBacklog_ += wallSeconds * speed_;
    const double dt = world_->scenario().physicsDt;
    std::int64_t n = std::min<std::int64_t>(kMaxStepsPerAdvance, static_cast<std::int64_t>(std::floor(simBacklog_ / dt)));
    simBacklog_ -= static_cast<double>(n) * dt;
    if (n == kMaxStepsPerAdvance) simBacklog_ = 0;  // drop time we cannot catch up on
    for (std::int64_t i = 0; i < n && !world_->done(); ++i) step_once(out);
    if (world_->done()) paused_ = true;
    if (n > 0 && sinceSnapshot_ >= 1.0 / kMaxSnapshotRate) {
        out.push_back(snapshot());
        sinceSnapshot_ = 0;
    }
    return out;
}

void ControlService::finish() {
    if (finished_) return;
    finished_ = true;
    paused_ = true;
    if (writer_) {
        if (steps_ != world_->scenario().total_ticks()) writer_->end(steps_, world_->tick());
        writer_->flush();
    }
}

}  // namespace smartlet::tools
