#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace smartlet::fsm {

inline constexpr int kProgramBits = 58;
inline constexpr int kPhaseBits = 18;
inline constexpr int kStepsPerCycle = 8;
inline constexpr int kAutorunDelayTicks = 8;

enum class CondSel : std::uint8_t { AtEnd = 0, Sensor1 = 1, Sensor2 = 2, Trigger = 3 };
enum class CondTarget : std::uint8_t { Previous = 0, Same = 1, Next = 2, Idle = 3 };

struct PhaseBlock {
    std::uint8_t pattern = 0;   // bit 7 drives step 0
    std::uint8_t mask = 0;      // bit0=A1 bit1=A2 bit2=A3
    std::uint8_t repeats = 0;   // cycles executed = repeats + 1
    CondSel condSel = CondSel::AtEnd;
    CondTarget condTarget = CondTarget::Previous;

    bool operator==(const PhaseBlock&) const = default;
};

struct LabletProgram {
    bool clockSelect = false;  // 0 slow, 1 fast
    bool autorun = false;
    bool sendOnIdle = false;
    bool reserved = false;
    std::array<PhaseBlock, 3> phases{};

    bool operator==(const LabletProgram&) const = default;
};

// 58-bit word, header bit 0 in bit 57 (first on the wire).
std::uint64_t serialize(const LabletProgram& p);
LabletProgram deserialize(std::uint64_t word);  // throws MalformedProgram
std::string to_bits(const LabletProgram& p);
LabletProgram from_bits(std::string_view text);  // throws MalformedProgram
std::string word_to_bits(std::uint64_t word);
std::uint64_t bits_to_word(std::string_view text);  // length/charset check only

// Canonical dive cycle: A1+A3 high for 8 cycles, then two silent phases, cyclic.
LabletProgram canonical_dive_program();

enum class Mode : std::uint8_t { Idle, Programming, Running, Sending };
enum class Level : std::uint8_t { Z, Low, High };

const char* to_string(Mode m);
const char* to_string(Level l);

namespace command {
inline constexpr std::uint8_t Start = 0b10100101;
inline constexpr std::uint8_t Stop = 0b01011010;
inline constexpr std::uint8_t Send = 0b11000011;
}  // namespace command

bool is_recognized(std::uint8_t cmd);
const char* command_name(std::uint8_t cmd);  // "START"/"STOP"/"SEND" or nullptr

// Signals raised by a transition; a tick may raise several.
enum Signal : std::uint32_t {
    SigNone = 0,
    SigProtocolViolation = 1u << 0,
    SigProgramLatched = 1u << 1,
    SigCommandIgnored = 1u << 2,
    SigStarted = 1u << 3,
    SigStopped = 1u << 4,
    SigSendStarted = 1u << 5,
    SigSendFinished = 1u << 6,
    SigPhaseChanged = 1u << 7,
    SigWentIdle = 1u << 8,
    SigTriggerSet = 1u << 9,
    SigAutorun = 1u << 10,
};

struct FsmState {
    Mode mode = Mode::Idle;
    int phase = 0;
    int step = 0;
    int cycles = 0;
    std::uint64_t shift = 0;  // low 58 bits
    int fill = 0;             // 0..58
    bool registerValid = false;  // register held a full program before this session
    std::array<Level, 3> actuators{Level::Z, Level::Z, Level::Z};
    std::array<bool, 2> sensors{false, false};
    bool pendingTrigger = false;
    bool dataOut = false;
    int sendIndex = 0;
    bool autorunArmed = false;
    int autorunCountdown = 0;

    bool operator==(const FsmState&) const = default;
};

struct Outcome {
    FsmState state;
    std::uint32_t signals = SigNone;
    bool has(Signal s) const { return (signals & s) != 0; }
};

// Fresh state with `program` already latched (power-on image).
FsmState installed(const LabletProgram& program);

// The latched program, valid when fill == 58.
LabletProgram latched_program(const FsmState& s);

Outcome load_bit(const FsmState& s, bool bit);
Outcome receive_command(const FsmState& s, std::uint8_t cmd);
// Program argument is the latched program; passed explicitly to keep tick pure.
Outcome tick(const FsmState& s, const LabletProgram& program);

}  // namespace smartlet::fsm
