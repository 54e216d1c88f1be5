#include "smartlet/world.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

namespace smartlet::engine {

using codec::Line;
using codec::Nanos;
using nlohmann::json;

namespace {

Nanos to_ns(double seconds) { return std::llround(seconds * static_cast<double>(codec::kNsPerSecond)); }

codec::ManchesterParams rx_params(const AgentConfig& c) {
    codec::ManchesterParams p;
    p.bitRate = c.decoderRate;
    p.toleranceFraction = c.decoderTolerance;
    return p;
}

void check_rate(double rateHz) {
    if (!(rateHz >= 1.0 && rateHz <= 1000.0)) throw ConfigError("light command rate must lie in [1, 1000] Hz");
}

constexpr double kOpdFloor = 1e-9;  // V; below this a dark filter snaps to zero

}  // namespace

// ---- transmissions ---------------------------------------------------------

bool Transmission::high(Nanos t) const {
    if (t < start) return false;
    const Nanos rel = t - start;
    const Nanos k = rel / period;
    if (k >= repeats) return false;
    const Nanos local = rel - k * period;
    if (local >= frame.duration) return false;
    return frame.level_at(local) == Line::High;
}

Transmission make_transmission(const Payload& payload, double rateHz, double duration, Nanos start) {
    codec::ManchesterParams mp;
    mp.bitRate = rateHz;
    const codec::Frame f =
        payload.kind == Payload::Kind::Command ? codec::command_frame(payload.command) : codec::program_frame(payload.program);
    Transmission t;
    t.frame = codec::encode_frame(f, mp);
    t.start = start;
    t.period = t.frame.duration + 2 * mp.nominal_period();
    const Nanos dur = to_ns(duration);
    t.repeats = static_cast<int>(std::max<Nanos>(1, (dur + 2 * mp.nominal_period()) / t.period));
    return t;
}

// ---- agents ----------------------------------------------------------------

Agent::Agent(const AgentConfig& c, const Scenario& s) : cfg(c), rx(rx_params(c), codec::ManchesterReceiver::Mode::Framed) {
    body.position = c.position;
    body.params = c.body;
    body.gasVolume = c.initialGas;
    body.onFloor = c.position.z <= aquatics::floor_z(c.body);
    body.atSurface = c.position.z >= aquatics::surface_z(c.body, s.tank);
    if (c.program) {
        fsm = fsm::installed(*c.program);
        program = *c.program;
    }
    opd = {photonics::OpdFilter(c.link), photonics::OpdFilter(c.link)};
    nextFsmTick = clock_period();
}

Nanos Agent::clock_period() const {
    const double hz = program.clockSelect ? cfg.fastClockHz : cfg.slowClockHz;
    return std::max<Nanos>(1, to_ns(1.0 / hz));
}

// ---- thread pool -------------------------------------------------------------

// Fixed workers for read-only per-agent evaluation; each index writes its own slot.
struct World::Pool {
    explicit Pool(int n) {
        for (int i = 0; i < n; ++i) workers.emplace_back([this, i] { loop(i); });
    }
    ~Pool() {
        {
            std::lock_guard lk(mu);
            stop = true;
            ++generation;
        }
        cv.notify_all();
        for (auto& w : workers) w.join();
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
        const std::size_t parts = workers.size() + 1;
        {
            std::lock_guard lk(mu);
            job = &fn;
            count = n;
            pending = static_cast<int>(workers.size());
            ++generation;
        }
        cv.notify_all();
        run_part(0, parts);
        std::unique_lock lk(mu);
        done.wait(lk, [this] { return pending == 0; });
        job = nullptr;
    }

private:
    void run_part(std::size_t part, std::size_t parts) {
        for (std::size_t i = part; i < count; i += parts) (*job)(i);
    }
    void loop(int index) {
        std::uint64_t seen = 0;
        for (;;) {
            std::unique_lock lk(mu);
            cv.wait(lk, [&] { return generation != seen; });
            seen = generation;
            if (stop) return;
            lk.unlock();
            run_part(static_cast<std::size_t>(index) + 1, workers.size() + 1);
            lk.lock();
            if (--pending == 0) done.notify_one();
        }
    }

    std::vector<std::thread> workers;
    std::mutex mu;
    std::condition_variable cv, done;
    const std::function<void(std::size_t)>* job = nullptr;
    std::size_t count = 0;
    int pending = 0;
    std::uint64_t generation = 0;
    bool stop = false;
};

// ---- world -------------------------------------------------------------------

World::World(Scenario scenario, std::optional<std::uint64_t> seed, int threads)
    : scenario_(std::move(scenario)),
      seed_(seed.value_or(scenario_.seed)),
      threads_(std::max(1, threads)),
      physicsNs_(to_ns(scenario_.physicsDt)),
      commSteps_(static_cast<int>(std::llround(scenario_.physicsDt / scenario_.commDt))),
      string_(photonics::folded_cube_string()) {
    commNs_ = physicsNs_ / commSteps_;
    if (threads_ > 1) pool_ = std::make_unique<Pool>(threads_ - 1);
    agents_.reserve(scenario_.agents.size());
    for (const auto& c : scenario_.agents) {
        agents_.emplace_back(c, scenario_);
        recompute_power(agents_.back());
        update_wiring(agents_.back());
    }
}

World::~World() = default;

double World::time() const { return static_cast<double>(now_ns()) * 1e-9; }

Agent& World::agent(int id) {
    for (auto& a : agents_)
        if (a.cfg.id == id) return a;
    throw ConfigError("no agent with id " + std::to_string(id));
}

const Agent& World::agent(int id) const { return const_cast<World*>(this)->agent(id); }

void World::log(std::string name, std::vector<int> ids, json extra) {
    // events raised while computing tick N+1 carry N+1; commands applied between steps carry N
    events_.push_back({tick_ + (inStep_ ? 1 : 0), std::move(name), std::move(ids), std::move(extra)});
}

void World::recompute_power(Agent& a) {
    if (a.cfg.tethered) {
        a.harvest = {photonics::kStringPower, photonics::kStringVoltage, photonics::kStringCurrent};
        a.powered = true;
        return;
    }
    photonics::LightEnvironment env;
    for (const auto& s : scenario_.suns) env.sources.push_back(s);
    a.harvest = photonics::string_power(string_, env);
    const bool was = a.powered;
    a.powered = a.harvest.power >= a.cfg.restingDraw;
    if (was != a.powered) log(a.powered ? "PowerRestored" : "PowerLost", {a.cfg.id});
}

void World::set_suns(std::vector<photonics::LightSource> suns) {
    scenario_.suns = std::move(suns);
    for (auto& a : agents_) {
        recompute_power(a);
        update_wiring(a);
    }
}

void World::inject_global_light(const Payload& payload, double rateHz, double duration) {
    check_rate(rateHz);
    if (!(duration > 0)) return;
    global_.push_back(make_transmission(payload, rateHz, duration, now_ns()));
    log("LightInjected", {},
        {{"source", "global"}, {"rate_hz", rateHz}, {"payload", payload.text()}, {"duration_s", duration}});
}

void World::inject_agent_light(int id, const Payload& payload, double rateHz, double duration) {
    check_rate(rateHz);
    Agent& a = agent(id);
    if (!(duration > 0)) return;
    Nanos start = now_ns();
    if (!a.tx.empty()) start = std::max(start, a.tx.back().end() + 2 * to_ns(1.0 / rateHz));
    a.tx.push_back(make_transmission(payload, rateHz, duration, start));
    log("LightInjected", {id}, {{"source", "agent"}, {"rate_hz", rateHz}, {"payload", payload.text()}, {"duration_s", duration}});
}

void World::program_agent(int id, std::uint64_t word) {
    Agent& a = agent(id);
    if (a.fsm.mode == fsm::Mode::Running || a.fsm.mode == fsm::Mode::Sending) {
        log("ProtocolViolation", {id}, {{"reason", "program while busy"}, {"mode", fsm::to_string(a.fsm.mode)}});
        throw ProtocolViolation("agent " + std::to_string(id) + " is " + fsm::to_string(a.fsm.mode) +
                                "; program rejected");
    }
    fsm::FsmState before = a.fsm;
    std::uint32_t sig = 0;
    for (int i = fsm::kProgramBits - 1; i >= 0; --i) {
        const auto o = fsm::load_bit(a.fsm, (word >> i) & 1u);
        a.fsm = o.state;
        sig |= o.signals;
    }
    after_fsm(a, before, sig);
}

void World::apply_message(const json& msg) {
    if (!msg.is_object() || !msg.contains("type") || !msg.at("type").is_string())
        throw ConfigError("message needs a string 'type'");
    const std::string type = msg.at("type").get<std::string>();
    auto number = [&](const char* k, double def) {
        if (!msg.contains(k)) return def;
        if (!msg.at(k).is_number()) throw ConfigError(std::string("'") + k + "' must be a number");
        return msg.at(k).get<double>();
    };
    if (type == "command") {
        const std::string kind = msg.value("kind", "global_light");
        if (!msg.contains("payload") || !msg.at("payload").is_string()) throw ConfigError("command needs a 'payload'");
        const Payload p = Payload::parse(msg.at("payload").get<std::string>());
        const double rate = number("rate_hz", 200);
        const double duration = number("duration_s", 0.5);
        if (kind == "global_light") {
            inject_global_light(p, rate, duration);
        } else if (kind == "agent_light") {
            if (!msg.contains("agent") || !msg.at("agent").is_number_integer())
                throw ConfigError("agent_light needs an integer 'agent'");
            inject_agent_light(msg.at("agent").get<int>(), p, rate, duration);
        } else {
            throw ConfigError("unknown command kind '" + kind + "'");
        }
    } else if (type == "program") {
        if (!msg.contains("agent") || !msg.at("agent").is_number_integer())
            throw ConfigError("program needs an integer 'agent'");
        if (!msg.contains("bits") || !msg.at("bits").is_string()) throw ConfigError("program needs 'bits'");
        const std::uint64_t word = fsm::bits_to_word(msg.at("bits").get<std::string>());
        fsm::deserialize(word);  // reject reserved bit before touching the agent
        program_agent(msg.at("agent").get<int>(), word);
    } else {
        throw ConfigError("unsupported message type '" + type + "'");
    }
}

void World::apply_schedule() {
    const Nanos tickEnd = now_ns() + physicsNs_;
    while (scheduleCursor_ < scenario_.schedule.size()) {
        const LightEvent& e = scenario_.schedule[scheduleCursor_];
        if (to_ns(e.t) >= tickEnd) break;
        ++scheduleCursor_;
        if (e.source == LightEvent::Source::Global)
            inject_global_light(e.payload, e.rateHz, e.duration);
        else
            inject_agent_light(e.agent, e.payload, e.rateHz, e.duration);
    }
}

void World::refresh_outputs(int id) { update_wiring(agent(id)); }

void World::update_wiring(Agent& a) {
    const bool red = a.powered && a.fsm.actuators[0] == fsm::Level::High;
    const bool bge = a.powered && a.fsm.actuators[2] == fsm::Level::High;
    a.red = red;
    if (bge != a.bge) {
        a.bge = bge;
        log(bge ? "BgeOn" : "BgeOff", {a.cfg.id});
    }
}

void World::after_fsm(Agent& a, const fsm::FsmState& before, std::uint32_t sig) {
    const int id = a.cfg.id;
    if (sig & fsm::SigProtocolViolation) log("ProtocolViolation", {id}, {{"mode", fsm::to_string(before.mode)}});
    if (sig & fsm::SigProgramLatched) {
        a.program = fsm::latched_program(a.fsm);
        log("ProgramLatched", {id}, {{"program", fsm::word_to_bits(a.fsm.shift)}});
    }
    if (sig & fsm::SigCommandIgnored) log("CommandIgnored", {id}, {{"mode", fsm::to_string(a.fsm.mode)}});
    if (sig & fsm::SigTriggerSet) log("TriggerSet", {id});
    if (sig & fsm::SigSendStarted) {
        Payload p;
        p.kind = Payload::Kind::Program;
        p.program = a.fsm.shift;
        const double rate = a.cfg.decoderRate;
        Nanos start = std::max(now_ns(), a.tx.empty() ? Nanos{0} : a.tx.back().end());
        a.tx.push_back(make_transmission(p, rate, 0, start));
    }
    if (a.fsm.mode != before.mode) log("ModeChanged", {id}, {{"mode", fsm::to_string(a.fsm.mode)}});
    if (a.fsm.mode == fsm::Mode::Running && (a.fsm.phase != before.phase || before.mode != fsm::Mode::Running))
        log("PhaseChanged", {id}, {{"phase", a.fsm.phase}});
    update_wiring(a);
}

void World::deliver(Agent& a, const codec::ManchesterReceiver::Event& ev) {
    using Kind = codec::ManchesterReceiver::Event::Kind;
    const int id = a.cfg.id;
    if (ev.kind == Kind::Abort) {
        log("FrameAbort", {id}, {{"discarded_bits", ev.discarded}});
        return;
    }
    if (ev.kind != Kind::Frame || !a.powered) return;
    const fsm::FsmState before = a.fsm;
    if (ev.frame.type == codec::FrameType::Command) {
        const auto cmd = static_cast<std::uint8_t>(codec::payload_value(ev.frame.payload));
        Payload p;
        p.command = cmd;
        log("CommandReceived", {id}, {{"command", p.text()}});
        const auto o = fsm::receive_command(a.fsm, cmd);
        a.fsm = o.state;
        after_fsm(a, before, o.signals);
        return;
    }
    if (a.fsm.mode == fsm::Mode::Running || a.fsm.mode == fsm::Mode::Sending) {
        log("ProtocolViolation", {id}, {{"reason", "program while busy"}, {"mode", fsm::to_string(a.fsm.mode)}});
        return;
    }
    std::uint32_t sig = 0;
    for (bool bit : ev.frame.payload) {
        const auto o = fsm::load_bit(a.fsm, bit);
        a.fsm = o.state;
        sig |= o.signals;
    }
    after_fsm(a, before, sig);
}

bool World::quiet(Nanos t) const {
    for (const auto& g : global_)
        if (t >= g.start && t < g.end()) return false;
    for (const auto& a : agents_) {
        if (a.rx.locked()) return false;
        if (a.opd[0].voltage() != 0 || a.opd[1].voltage() != 0) return false;
        if (!a.tx.empty() && t >= a.tx.front().start) return false;
    }
    return true;
}

void World::sense(Agent& a, Nanos t, bool globalOn) {
    (void)t;
    const double half = a.body.params.edge / 2;
    const double dt = static_cast<double>(commNs_) * 1e-9;
    for (int k = 0; k < 2; ++k) {
        const Vec3 n = face_normal(a.cfg.opdFaces[k]);
        const photonics::Receiver rcv{a.body.position + n * half, n};
        double e = globalOn ? scenario_.globalLightIrradiance * std::max(0.0, n.z) : 0.0;
        for (const auto& other : agents_) {
            if (&other == &a || !other.green) continue;
            const Vec3 en = face_normal(other.cfg.greenLedFace);
            const photonics::Emitter em{other.body.position + en * (other.body.params.edge / 2), en, true};
            e += photonics::link_irradiance(other.cfg.link, em, rcv);
        }
        const double v = photonics::opd_voltage(a.cfg.link, e);
        auto& f = a.opd[k];
        f.step(v, dt);
        if (v == 0 && f.voltage() < kOpdFloor) f = photonics::OpdFilter(a.cfg.link);
        a.opdDigital[k] = f.digital();
    }
}

void World::comm_substep(Nanos t) {
    std::erase_if(global_, [t](const Transmission& g) { return g.end() <= t; });
    bool globalOn = false;
    for (const auto& g : global_) globalOn = globalOn || g.high(t);
    for (auto& a : agents_) {
        while (!a.tx.empty() && a.tx.front().end() <= t) a.tx.pop_front();
        a.green = a.powered && !a.tx.empty() && a.tx.front().high(t);
    }

    if (!quiet(t)) {
        if (pool_ && agents_.size() >= 4) {
            pool_->parallel_for(agents_.size(), [&](std::size_t i) { sense(agents_[i], t, globalOn); });
        } else {
            for (auto& a : agents_) sense(a, t, globalOn);
        }
        for (auto& a : agents_) {
            a.fsm.sensors = a.opdDigital;
            a.rx.sample(t, (a.opdDigital[0] || a.opdDigital[1]) ? Line::High : Line::Low);
            for (const auto& ev : a.rx.drain()) deliver(a, ev);
        }
    }
    clock_fsms(t);
}

void World::clock_fsms(Nanos t) {
    for (auto& a : agents_) {
        while (a.nextFsmTick <= t) {
            a.nextFsmTick += a.clock_period();
            if (!a.powered) continue;
            const fsm::FsmState before = a.fsm;
            const auto o = fsm::tick(a.fsm, a.program);
            a.fsm = o.state;
            if (o.signals != fsm::SigNone || !(a.fsm == before)) after_fsm(a, before, o.signals);
        }
    }
}

std::vector<int> World::clusters() const {
    std::vector<int> parent(agents_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto index = [&](int id) {
        for (std::size_t i = 0; i < agents_.size(); ++i)
            if (agents_[i].cfg.id == id) return static_cast<int>(i);
        return -1;
    };
    for (const auto& b : bonds_) {
        const int x = find(index(b.a)), y = find(index(b.b));
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = find(static_cast<int>(i));
    return parent;
}

void World::physics() {
    const std::size_t n = agents_.size();
    const double dt = scenario_.physicsDt;
    const auto& w = scenario_.water;
    const std::vector<int> cluster = clusters();

    std::vector<Vec3> force(n);
    std::vector<double> vertical(n);
    auto evaluate = [&](std::size_t i) {
        const Agent& a = agents_[i];
        if (a.cfg.tethered) return;
        vertical[i] = aquatics::buoyancy_force(a.body, w);
        Vec3 f{0, 0, vertical[i]};
        if (a.body.atSurface) {
            for (std::size_t j = 0; j < n; ++j) {
                const Agent& b = agents_[j];
                if (j == i || b.cfg.tethered || !b.body.atSurface || cluster[j] == cluster[i]) continue;
                Vec3 d = b.body.position - a.body.position;
                d.z = 0;
                const double dist = norm(d);
                if (dist <= 0) continue;
                const double dContact = (a.body.params.edge + b.body.params.edge) / 2;
                f += d * (aquatics::capillary_force(dist, dContact, w) / dist);
            }
        }
        force[i] = f;
    };
    if (pool_ && n >= 4)
        pool_->parallel_for(n, evaluate);
    else
        for (std::size_t i = 0; i < n; ++i) evaluate(i);

    // bonded clusters move as one body
    std::vector<Vec3> shared(n);
    std::vector<int> members(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        shared[cluster[i]] += force[i];
        ++members[cluster[i]];
    }

    for (std::size_t i = 0; i < n; ++i) {
        Agent& a = agents_[i];
        a.bgeCurrent = 0;
        if (a.bge) a.bgeCurrent = a.cfg.tethered ? aquatics::kBgeMaxCurrent : aquatics::bge_current(a.harvest.power, a.harvest.vOut);
        aquatics::MotionInput in;
        in.force = members[cluster[i]] > 1 ? shared[cluster[i]] / members[cluster[i]] : force[i];
        in.gasRate = aquatics::gas_rate(a.bgeCurrent * a.cfg.faradayEfficiency);
        in.pinned = a.cfg.tethered;
        if (a.bonds.empty()) {
            const CounterRng rng(seed_, static_cast<std::uint64_t>(a.cfg.id));
            rng.normal_pair(static_cast<std::uint64_t>(tick_), in.kick.x, in.kick.y);
        }
        const aquatics::SmartletBody old = a.body;
        a.body = aquatics::step_motion(old, in, w, scenario_.tank, dt);
        const int id = a.cfg.id;
        if (old.onFloor && !a.body.onFloor) log("Levitate", {id});
        if (!old.atSurface && a.body.atSurface) log("SurfaceReached", {id});
        if (old.atSurface && !a.body.atSurface) log("SinkStart", {id});
        if (!old.onFloor && a.body.onFloor) log("FloorReached", {id});
    }

    // keep unbonded cubes from interpenetrating
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Agent& a = agents_[i];
            Agent& b = agents_[j];
            if (cluster[i] == cluster[j] && members[cluster[i]] > 1) continue;
            if (a.cfg.tethered && b.cfg.tethered) continue;
            const double edge = (a.body.params.edge + b.body.params.edge) / 2;
            const Vec3 d = b.body.position - a.body.position;
            if (std::abs(d.x) >= edge || std::abs(d.y) >= edge || std::abs(d.z) >= edge) continue;
            int axis = 0;
            for (int k = 1; k < 3; ++k)
                if (std::abs(d[k]) > std::abs(d[axis])) axis = k;
            const double overlap = edge - std::abs(d[axis]);
            const double sign = d[axis] >= 0 ? 1.0 : -1.0;
            const double shareA = a.cfg.tethered ? 0.0 : (b.cfg.tethered ? 1.0 : 0.5);
            Vec3 push{};
            (axis == 0 ? push.x : axis == 1 ? push.y : push.z) = overlap * sign;
            a.body.position = a.body.position - push * shareA;
            b.body.position = b.body.position + push * (1.0 - shareA);
        }
    }
    update_bonds(vertical);
}

void World::update_bonds(const std::vector<double>& vertical) {
    const auto& w = scenario_.water;
    auto index = [&](int id) {
        for (std::size_t i = 0; i < agents_.size(); ++i)
            if (agents_[i].cfg.id == id) return i;
        return agents_.size();
    };
    // undock where the internal force to co-move exceeds the bond
    for (auto it = bonds_.begin(); it != bonds_.end();) {
        const std::size_t ia = index(it->a), ib = index(it->b);
        const double separating = std::abs(vertical[ia] - vertical[ib]) / 2;
        if (separating > it->strength) {
            std::erase(agents_[ia].bonds, it->b);
            std::erase(agents_[ib].bonds, it->a);
            log("Undocked", {it->a, it->b},
                {{"faces", {kFaceNames[static_cast<int>(it->faceA)], kFaceNames[static_cast<int>(it->faceB)]}},
                 {"score", it->score},
                 {"separating_force_n", separating}});
            it = bonds_.erase(it);
        } else {
            ++it;
        }
    }
    const std::vector<int> cluster = clusters();
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        for (std::size_t j = i + 1; j < agents_.size(); ++j) {
            Agent& a = agents_[i];
            Agent& b = agents_[j];
            if (a.cfg.tethered || b.cfg.tethered || !a.body.atSurface || !b.body.atSurface) continue;
            if (cluster[i] == cluster[j]) continue;
            const double edge = (a.body.params.edge + b.body.params.edge) / 2;
            const auto c = aquatics::detect_contact(a.body.position, b.body.position, edge);
            if (!c || c->gap >= w.captureFraction * edge) continue;
            const auto& fa = a.cfg.faces[static_cast<int>(c->faceA)];
            const auto& fb = b.cfg.faces[static_cast<int>(c->faceB)];
            if (c->offset != aquatics::Offset::Full && !(fa.registration && fb.registration)) continue;
            const int score = aquatics::dock_score(fa, fb, c->offset);
            if (score < w.minDockScore) continue;
            Bond bond{a.cfg.id, b.cfg.id, c->faceA, c->faceB, c->offset, score, w.bondForcePerUnit * score};
            // a bond that would break in the same tick never forms
            if (std::abs(vertical[i] - vertical[j]) / 2 > bond.strength) continue;
            bonds_.push_back(bond);
            a.bonds.push_back(b.cfg.id);
            b.bonds.push_back(a.cfg.id);
            log("Docked", {a.cfg.id, b.cfg.id},
                {{"faces", {kFaceNames[static_cast<int>(c->faceA)], kFaceNames[static_cast<int>(c->faceB)]}},
                 {"offset", aquatics::to_string(c->offset)},
                 {"score", score}});
            return;  // one new bond per tick keeps cluster bookkeeping simple
        }
    }
}

void World::step() {
    inStep_ = false;
    apply_schedule();
    inStep_ = true;
    const Nanos t0 = now_ns();
    for (int k = 0; k < commSteps_; ++k) comm_substep(t0 + k * commNs_);
    physics();
    ++tick_;
    inStep_ = false;
}

void World::run_ticks(std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i) step();
}

json World::snapshot() const {
    json agents = json::array();
    for (const auto& a : agents_) {
        const auto& p = a.body.position;
        agents.push_back({{"id", a.cfg.id},
                          {"name", a.cfg.name},
                          {"pos", {p.x * 1e3, p.y * 1e3, p.z * 1e3}},
                          {"gas_nl", a.body.gasVolume * 1e12},
                          {"mode", fsm::to_string(a.fsm.mode)},
                          {"phase", a.fsm.phase},
                          {"leds", {{"g", a.green}, {"r", a.red}}},
                          {"bge", a.bge},
                          {"at_surface", a.body.atSurface},
                          {"bonds", a.bonds}});
    }
    return {{"type", "state"}, {"tick", tick_}, {"t", time()}, {"agents", std::move(agents)}};
}

}  // namespace smartlet::engine
