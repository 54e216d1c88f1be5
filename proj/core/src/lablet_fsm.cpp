#include "smartlet/lablet_fsm.hpp"

#include "smartlet/error.hpp"

namespace smartlet::fsm {
namespace {

constexpr std::uint64_t kMask58 = (std::uint64_t{1} << kProgramBits) - 1;

// Emit `width` bits of `value` MSB-first into `word`.
void put(std::uint64_t& word, int& pos, std::uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i) {
        const int bitIndex = kProgramBits - 1 - pos;
        if ((value >> i) & 1u) word |= std::uint64_t{1} << bitIndex;
        ++pos;
    }
}

std::uint64_t take(std::uint64_t word, int& pos, int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
        const int bitIndex = kProgramBits - 1 - pos;
        v = (v << 1) | ((word >> bitIndex) & 1u);
        ++pos;
    }
    return v;
}

bool pattern_bit(const PhaseBlock& ph, int step) { return (ph.pattern >> (7 - step)) & 1u; }

void drive_outputs(FsmState& s, const LabletProgram& p) {
    const PhaseBlock& ph = p.phases[s.phase];
    for (int a = 0; a < 3; ++a) {
        if ((ph.mask >> a) & 1u)
            s.actuators[a] = pattern_bit(ph, s.step) ? Level::High : Level::Low;
        else
            s.actuators[a] = Level::Z;
    }
}

void all_z(FsmState& s) { s.actuators = {Level::Z, Level::Z, Level::Z}; }

void start_running(FsmState& s, const LabletProgram& p) {
    s.mode = Mode::Running;
    s.phase = 0;
    s.step = 0;
    s.cycles = 0;
    s.pendingTrigger = false;
    s.autorunArmed = false;
    drive_outputs(s, p);
}

void begin_sending(FsmState& s) {
    s.mode = Mode::Sending;
    s.sendIndex = 0;
    all_z(s);
}

// Follow condTarget from the current phase. Returns the signals raised.
std::uint32_t jump(FsmState& s, const LabletProgram& p, CondTarget target) {
    s.pendingTrigger = false;
    s.step = 0;
    s.cycles = 0;
    switch (target) {
        case CondTarget::Previous: s.phase = (s.phase + 2) % 3; break;
        case CondTarget::Same: break;
        case CondTarget::Next: s.phase = (s.phase + 1) % 3; break;
        case CondTarget::Idle:
            s.phase = 0;
            all_z(s);
            if (p.sendOnIdle) {
                begin_sending(s);
                return SigWentIdle | SigSendStarted;
            }
            s.mode = Mode::Idle;
            return SigWentIdle;
    }
    drive_outputs(s, p);
    return SigPhaseChanged;
}

bool condition_met(const FsmState& s, CondSel sel) {
    switch (sel) {
        case CondSel::AtEnd: return false;
        case CondSel::Sensor1: return s.sensors[0];
        case CondSel::Sensor2: return s.sensors[1];
        case CondSel::Trigger: return s.pendingTrigger;
    }
    return false;
}

}  // namespace

std::uint64_t serialize(const LabletProgram& p) {
    std::uint64_t w = 0;
    int pos = 0;
    put(w, pos, p.clockSelect, 1);
    put(w, pos, p.autorun, 1);
    put(w, pos, p.sendOnIdle, 1);
    put(w, pos, p.reserved, 1);
    for (const auto& ph : p.phases) {
        put(w, pos, ph.pattern, 8);
        put(w, pos, ph.mask & 0x7u, 3);
        put(w, pos, ph.repeats & 0x7u, 3);
        put(w, pos, static_cast<unsigned>(ph.condSel), 2);
        put(w, pos, static_cast<unsigned>(ph.condTarget), 2);
    }
    return w;
}

LabletProgram deserialize(std::uint64_t word) {
    if (word & ~kMask58) throw MalformedProgram("program word wider than 58 bits");
    LabletProgram p;
    int pos = 0;
    p.clockSelect = take(word, pos, 1);
    p.autorun = take(word, pos, 1);
    p.sendOnIdle = take(word, pos, 1);
    p.reserved = take(word, pos, 1);
    if (p.reserved) throw MalformedProgram("reserved header bit is set");
    for (auto& ph : p.phases) {
        ph.pattern = static_cast<std::uint8_t>(take(word, pos, 8));
        ph.mask = static_cast<std::uint8_t>(take(word, pos, 3));
        ph.repeats = static_cast<std::uint8_t>(take(word, pos, 3));
        ph.condSel = static_cast<CondSel>(take(word, pos, 2));
        ph.condTarget = static_cast<CondTarget>(take(word, pos, 2));
    }
    return p;
}

std::string word_to_bits(std::uint64_t word) {
    std::string s(kProgramBits, '0');
    for (int i = 0; i < kProgramBits; ++i)
        if ((word >> (kProgramBits - 1 - i)) & 1u) s[i] = '1';
    return s;
}

std::uint64_t bits_to_word(std::string_view text) {
    if (text.size() != kProgramBits)
        throw MalformedProgram("program must be exactly 58 bits, got " + std::to_string(text.size()));
    std::uint64_t w = 0;
    for (char c : text) {
        if (c != '0' && c != '1') throw MalformedProgram("program text may contain only '0' and '1'");
        w = (w << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return w;
}

std::string to_bits(const LabletProgram& p) { return word_to_bits(serialize(p)); }
LabletProgram from_bits(std::string_view text) { return deserialize(bits_to_word(text)); }

LabletProgram canonical_dive_program() {
    LabletProgram p;
    p.phases[0] = {0xFF, 0b101, 7, CondSel::AtEnd, CondTarget::Next};
    p.phases[1] = {0x00, 0b000, 7, CondSel::AtEnd, CondTarget::Next};
    p.phases[2] = {0x00, 0b000, 7, CondSel::AtEnd, CondTarget::Next};
    return p;
}

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Idle: return "Idle";
        case Mode::Programming: return "Programming";
        case Mode::Running: return "Running";
        case Mode::Sending: return "Sending";
    }
    return "?";
}

const char* to_string(Level l) {
    switch (l) {
        case Level::Z: return "Z";
        case Level::Low: return "L";
        case Level::High: return "H";
    }
    return "?";
}

bool is_recognized(std::uint8_t cmd) { return command_name(cmd) != nullptr; }

const char* command_name(std::uint8_t cmd) {
    switch (cmd) {
        case command::Start: return "START";
        case command::Stop: return "STOP";
        case command::Send: return "SEND";
        default: return nullptr;
    }
}

FsmState installed(const LabletProgram& program) {
    FsmState s;
    s.shift = serialize(program);
    s.fill = kProgramBits;
    s.registerValid = true;
    s.autorunArmed = program.autorun;
    s.autorunCountdown = kAutorunDelayTicks;
    return s;
}

LabletProgram latched_program(const FsmState& s) {
    // reserved may be set by a stray load; mask it rather than throw mid-run
    return deserialize(s.shift & ~(std::uint64_t{1} << (kProgramBits - 4)));
}

Outcome load_bit(const FsmState& in, bool bit) {
    if (in.mode == Mode::Running || in.mode == Mode::Sending) return {in, SigProtocolViolation};
    Outcome o{in, SigNone};
    FsmState& s = o.state;
    if (s.mode == Mode::Idle) {
        s.mode = Mode::Programming;
        s.registerValid = (s.fill == kProgramBits);
        s.fill = 0;
        s.autorunArmed = false;
    }
    const bool out = (s.shift >> (kProgramBits - 1)) & 1u;
    s.shift = ((s.shift << 1) | static_cast<std::uint64_t>(bit)) & kMask58;
    s.dataOut = s.registerValid && out;
    if (++s.fill == kProgramBits) {
        s.mode = Mode::Idle;
        s.registerValid = true;
        const bool autorun = (s.shift >> (kProgramBits - 2)) & 1u;
        s.autorunArmed = autorun;
        s.autorunCountdown = kAutorunDelayTicks;
        o.signals |= SigProgramLatched;
    }
    return o;
}

Outcome receive_command(const FsmState& in, std::uint8_t cmd) {
    if (!is_recognized(cmd)) return {in, SigNone};
    if (in.mode == Mode::Programming || in.mode == Mode::Sending) return {in, SigCommandIgnored};

    Outcome o{in, SigNone};
    FsmState& s = o.state;
    const bool loaded = s.fill == kProgramBits;

    if (s.mode == Mode::Running) {
        const LabletProgram p = latched_program(s);
        if (p.phases[s.phase].condSel == CondSel::Trigger) {
            s.pendingTrigger = true;
            o.signals |= SigTriggerSet;
        }
        if (cmd == command::Stop) {
            s.mode = Mode::Idle;
            s.phase = s.step = s.cycles = 0;
            s.pendingTrigger = false;
            s.autorunArmed = false;
            all_z(s);
            o.signals |= SigStopped;
        } else if (!(o.signals & SigTriggerSet)) {
            o.signals |= SigCommandIgnored;
        }
        return o;
    }

    // Idle
    if (cmd == command::Start && loaded) {
        start_running(s, latched_program(s));
        o.signals |= SigStarted;
    } else if (cmd == command::Send && loaded) {
        begin_sending(s);
        o.signals |= SigSendStarted;
    } else if (cmd == command::Stop) {
        s.autorunArmed = false;
    } else {
        o.signals |= SigCommandIgnored;
    }
    return o;
}

Outcome tick(const FsmState& in, const LabletProgram& p) {
    Outcome o{in, SigNone};
    FsmState& s = o.state;
    switch (s.mode) {
        case Mode::Programming:
            return o;
        case Mode::Idle:
            s.dataOut = false;
            if (s.autorunArmed && p.autorun && s.fill == kProgramBits && --s.autorunCountdown <= 0) {
                start_running(s, p);
                o.signals |= SigAutorun | SigStarted;
            }
            return o;
        case Mode::Sending:
            s.dataOut = (s.shift >> (kProgramBits - 1 - s.sendIndex)) & 1u;
            if (++s.sendIndex == kProgramBits) {
                s.mode = Mode::Idle;
                s.sendIndex = 0;
                o.signals |= SigSendFinished;
            }
            return o;
        case Mode::Running:
            break;
    }

    const PhaseBlock& ph = p.phases[s.phase];
    if (condition_met(s, ph.condSel)) {
        o.signals |= jump(s, p, ph.condTarget);
        return o;
    }
    if (++s.step == kStepsPerCycle) {
        s.step = 0;
        if (++s.cycles == ph.repeats + 1) {
            const CondTarget t = ph.condSel == CondSel::AtEnd ? ph.condTarget : CondTarget::Next;
            o.signals |= jump(s, p, t);
            return o;
        }
    }
    drive_outputs(s, p);
    return o;
}

}  // namespace smartlet::fsm
