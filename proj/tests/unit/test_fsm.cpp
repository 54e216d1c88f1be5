#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "smartlet/error.hpp"
#include "smartlet/lablet_fsm.hpp"

using namespace smartlet;
using namespace smartlet::fsm;

namespace {

LabletProgram random_program(std::mt19937_64& rng) {
    std::uint64_t w = rng() & ((std::uint64_t{1} << kProgramBits) - 1);
    w &= ~(std::uint64_t{1} << (kProgramBits - 4));  // reserved
    return deserialize(w);
}

FsmState load(FsmState s, std::uint64_t word, std::uint32_t* sig = nullptr) {
    for (int i = kProgramBits - 1; i >= 0; --i) {
        const auto o = load_bit(s, (word >> i) & 1u);
        s = o.state;
        if (sig) *sig |= o.signals;
    }
    return s;
}

std::string row(const FsmState& s) {
    std::string r(1, to_string(s.mode)[0]);
    r += ':';
    for (auto a : s.actuators) r += to_string(a);
    r += s.dataOut ? '1' : '0';
    return r;
}

}  // namespace

TEST_SUITE("fsm") {

TEST_CASE("serialize/deserialize round trip over random words") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        const LabletProgram p = random_program(rng);
        CHECK(deserialize(serialize(p)) == p);
        CHECK(from_bits(to_bits(p)) == p);
    }
}

TEST_CASE("all-zero word is the all-zero program") {
    const LabletProgram p = deserialize(0);
    CHECK(p == LabletProgram{});
    CHECK(to_bits(p) == std::string(58, '0'));
}

TEST_CASE("malformed programs are rejected") {
    CHECK_THROWS_AS(from_bits(std::string(57, '0')), MalformedProgram);
    CHECK_THROWS_AS(from_bits(std::string(59, '0')), MalformedProgram);
    CHECK_THROWS_AS(from_bits("0001" + std::string(54, '0')), MalformedProgram);
    CHECK_THROWS_AS(from_bits(std::string(57, '0') + "2"), MalformedProgram);
    CHECK_THROWS_AS(deserialize(std::uint64_t{1} << 58), MalformedProgram);
}

TEST_CASE("golden bit strings from the independent packer") {
    const auto g = fixtures::json("golden_programs.json");
    CHECK(to_bits(canonical_dive_program()) == g.at("canonical_dive").get<std::string>());
    LabletProgram autorun = canonical_dive_program();
    autorun.autorun = true;
    CHECK(to_bits(autorun) == g.at("canonical_dive_autorun").get<std::string>());
    const LabletProgram d = from_bits(g.at("fields_distinct").get<std::string>());
    CHECK(d.clockSelect);
    CHECK_FALSE(d.autorun);
    CHECK(d.sendOnIdle);
    CHECK(d.phases[0].pattern == 0xA5);
    CHECK(d.phases[0].mask == 0b011);
    CHECK(d.phases[0].repeats == 5);
    CHECK(d.phases[0].condSel == CondSel::Sensor1);
    CHECK(d.phases[0].condTarget == CondTarget::Idle);
    CHECK(d.phases[1].condSel == CondSel::Sensor2);
    CHECK(d.phases[1].condTarget == CondTarget::Previous);
    CHECK(d.phases[2].condSel == CondSel::Trigger);
    CHECK(d.phases[2].condTarget == CondTarget::Same);
}

TEST_CASE("shift-register identity: load then SEND echoes the program") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t word = serialize(random_program(rng));
        std::uint32_t sig = 0;
        FsmState s = load(FsmState{}, word, &sig);
        REQUIRE((sig & SigProgramLatched));
        CHECK(s.fill == kProgramBits);
        CHECK(s.mode == Mode::Idle);
        auto o = receive_command(s, command::Send);
        REQUIRE(o.has(SigSendStarted));
        s = o.state;
        std::uint64_t echoed = 0;
        for (int k = 0; k < kProgramBits; ++k) {
            const auto t = tick(s, latched_program(s));
            s = t.state;
            echoed = (echoed << 1) | static_cast<std::uint64_t>(s.dataOut);
        }
        CHECK(echoed == word);
        CHECK(s.mode == Mode::Idle);
    }
}

TEST_CASE("bits shifted past 58 appear on the data output") {
    std::mt19937_64 rng(3);
    const std::uint64_t first = serialize(random_program(rng));
    const std::uint64_t second = serialize(random_program(rng));
    FsmState s = load(FsmState{}, first);
    std::uint64_t out = 0;
    for (int i = kProgramBits - 1; i >= 0; --i) {
        s = load_bit(s, (second >> i) & 1u).state;
        out = (out << 1) | static_cast<std::uint64_t>(s.dataOut);
    }
    CHECK(out == first);
    CHECK(s.shift == second);
}

TEST_CASE("load_bit while Running or Sending is a protocol violation") {
    FsmState s = installed(canonical_dive_program());
    s = receive_command(s, command::Start).state;
    const auto o = load_bit(s, true);
    CHECK(o.has(SigProtocolViolation));
    CHECK(o.state == s);
    FsmState send = receive_command(installed(canonical_dive_program()), command::Send).state;
    CHECK(load_bit(send, false).has(SigProtocolViolation));
}

TEST_CASE("all-zero program without autorun stays idle") {
    FsmState s = installed(LabletProgram{});
    for (int i = 0; i < 500; ++i) {
        s = tick(s, LabletProgram{}).state;
        CHECK(s.mode == Mode::Idle);
        CHECK(s.actuators == std::array{Level::Z, Level::Z, Level::Z});
    }
}

TEST_CASE("START / STOP semantics") {
    LabletProgram p;
    p.phases[0] = {0b10101010, 0b100, 0, CondSel::AtEnd, CondTarget::Next};
    FsmState s = installed(p);
    const auto started = receive_command(s, command::Start);
    CHECK(started.has(SigStarted));
    CHECK(started.state.mode == Mode::Running);
    CHECK(started.state.phase == 0);
    CHECK(started.state.step == 0);
    CHECK(started.state.actuators == std::array{Level::Z, Level::Z, Level::High});
    s = started.state;
    for (int i = 1; i < 8; ++i) {
        s = tick(s, p).state;
        CHECK(s.actuators[2] == ((i % 2) ? Level::Low : Level::High));
        CHECK(s.actuators[0] == Level::Z);
        CHECK(s.actuators[1] == Level::Z);
    }
    const auto stopped = receive_command(s, command::Stop);
    CHECK(stopped.has(SigStopped));
    CHECK(stopped.state.mode == Mode::Idle);
    CHECK(stopped.state.actuators == std::array{Level::Z, Level::Z, Level::Z});
}

TEST_CASE("unrecognized commands change nothing") {
    FsmState s = installed(canonical_dive_program());
    for (int c = 0; c < 256; ++c) {
        if (is_recognized(static_cast<std::uint8_t>(c))) continue;
        CHECK(receive_command(s, static_cast<std::uint8_t>(c)).state == s);
    }
}

TEST_CASE("commands during Programming or Sending are ignored") {
    FsmState s = load_bit(installed(canonical_dive_program()), true).state;
    REQUIRE(s.mode == Mode::Programming);
    auto o = receive_command(s, command::Start);
    CHECK(o.has(SigCommandIgnored));
    CHECK(o.state == s);
}

TEST_CASE("condTarget previous from phase 0 wraps to phase 2") {
    LabletProgram p;
    p.phases[0] = {0x0F, 0b001, 0, CondSel::AtEnd, CondTarget::Previous};
    FsmState s = receive_command(installed(p), command::Start).state;
    for (int i = 0; i < 8; ++i) s = tick(s, p).state;
    CHECK(s.phase == 2);
    CHECK(s.mode == Mode::Running);
}

TEST_CASE("sensor condition jumps at the next step boundary") {
    LabletProgram p;
    p.phases[0] = {0xFF, 0b010, 7, CondSel::Sensor1, CondTarget::Idle};
    FsmState s = receive_command(installed(p), command::Start).state;
    s = tick(s, p).state;
    s.sensors[0] = true;
    const auto o = tick(s, p);
    CHECK(o.has(SigWentIdle));
    CHECK(o.state.mode == Mode::Idle);
}

TEST_CASE("trigger condition: a recognized command sets pendingTrigger") {
    LabletProgram p;
    p.phases[0] = {0xFF, 0b001, 7, CondSel::Trigger, CondTarget::Next};
    FsmState s = receive_command(installed(p), command::Start).state;
    const auto o = receive_command(s, command::Send);
    CHECK(o.has(SigTriggerSet));
    CHECK(o.state.pendingTrigger);
    s = tick(o.state, p).state;
    CHECK(s.phase == 1);
    CHECK_FALSE(s.pendingTrigger);
}

TEST_CASE("autorun starts a latched program after the delay") {
    LabletProgram p = canonical_dive_program();
    p.autorun = true;
    FsmState s = installed(p);
    int started = -1;
    for (int i = 0; i < 20 && started < 0; ++i) {
        const auto o = tick(s, p);
        s = o.state;
        if (o.has(SigAutorun)) started = i + 1;
    }
    CHECK(started == kAutorunDelayTicks);
    CHECK(s.mode == Mode::Running);
}

TEST_CASE("clock independence: actuator sequences ignore clockSelect") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        LabletProgram a = random_program(rng);
        a.clockSelect = false;
        LabletProgram b = a;
        b.clockSelect = true;
        FsmState sa = receive_command(installed(a), command::Start).state;
        FsmState sb = receive_command(installed(b), command::Start).state;
        for (int t = 0; t < 300; ++t) {
            sa = tick(sa, a).state;
            sb = tick(sb, b).state;
            REQUIRE(sa.actuators == sb.actuators);
            REQUIRE(sa.mode == sb.mode);
        }
    }
}

TEST_CASE("tristate safety over random programs and stimuli") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        const LabletProgram p = random_program(rng);
        FsmState s = installed(p);
        for (int t = 0; t < 200; ++t) {
            const auto r = rng() % 16;
            if (r == 0) s = receive_command(s, command::Start).state;
            if (r == 1) s = receive_command(s, command::Stop).state;
            if (r == 2) s = receive_command(s, command::Send).state;
            if (r == 3) s.sensors = {static_cast<bool>(rng() & 1), static_cast<bool>(rng() & 1)};
            s = tick(s, p).state;
            if (s.mode != Mode::Running) {
                REQUIRE(s.actuators == std::array{Level::Z, Level::Z, Level::Z});
            } else {
                for (int a = 0; a < 3; ++a)
                    if (!((p.phases[s.phase].mask >> a) & 1u)) REQUIRE(s.actuators[a] == Level::Z);
            }
        }
    }
}

TEST_CASE("transition totality: every mode x phase x condSel x condTarget") {
    int visited = 0;
    const Mode modes[] = {Mode::Idle, Mode::Programming, Mode::Running, Mode::Sending};
    for (Mode m : modes) {
        for (int phase = 0; phase < 3; ++phase) {
            for (int cs = 0; cs < 4; ++cs) {
                for (int ct = 0; ct < 4; ++ct) {
                    for (int cond = 0; cond < 2; ++cond) {
                        LabletProgram p;
                        for (auto& ph : p.phases) ph = {0xA5, 0b111, 0, static_cast<CondSel>(cs), static_cast<CondTarget>(ct)};
                        FsmState s = installed(p);
                        s.mode = m;
                        s.phase = phase;
                        s.step = 7;
                        s.sensors = {cond == 1, cond == 1};
                        s.pendingTrigger = cond == 1;
                        if (m == Mode::Programming) s.fill = 10;
                        const auto t = tick(s, p);
                        CHECK(t.state.phase >= 0);
                        CHECK(t.state.phase < 3);
                        CHECK(t.state.step >= 0);
                        CHECK(t.state.step < 8);
                        for (std::uint8_t c : {command::Start, command::Stop, command::Send, std::uint8_t{0}}) {
                            const auto r = receive_command(s, c);
                            CHECK(r.state.phase < 3);
                        }
                        ++visited;
                    }
                }
            }
        }
    }
    CHECK(visited == 4 * 3 * 4 * 4 * 2);
}

TEST_CASE("golden vectors from the reference FSM") {
    const auto vectors = fixtures::jsonl("fsm_vectors.jsonl");
    REQUIRE(vectors.size() > 300);
    for (const auto& v : vectors) {
        CAPTURE(v.at("name").get<std::string>());
        LabletProgram p = from_bits(v.at("program").get<std::string>());
        FsmState s = installed(p);
        const auto& stim = v.at("stimulus");
        std::size_t k = 0;
        const auto& expected = v.at("expected");
        for (std::int64_t t = 0; t < v.at("ticks").get<std::int64_t>(); ++t) {
            for (; k < stim.size() && stim[k].at("tick").get<std::int64_t>() <= t; ++k) {
                const auto& e = stim[k];
                if (e.contains("sensors")) s.sensors = e.at("sensors").get<std::array<bool, 2>>();
                if (e.contains("command")) {
                    const std::string c = e.at("command").get<std::string>();
                    std::uint8_t value = c == "START" ? command::Start
                                       : c == "STOP"  ? command::Stop
                                       : c == "SEND"  ? command::Send
                                                      : static_cast<std::uint8_t>(std::stoul(c.substr(2), nullptr, 16));
                    s = receive_command(s, value).state;
                }
            }
            s = tick(s, p).state;
            REQUIRE(row(s) == expected[static_cast<std::size_t>(t)].get<std::string>());
        }
    }
}

}  // TEST_SUITE
