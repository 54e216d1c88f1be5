#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smartlet/pulse_train.hpp"

namespace smartlet::codec {

using Bits = std::vector<bool>;

enum class Convention : std::uint8_t { RisingIsOne, FallingIsOne };

struct ManchesterParams {
    double bitRate = 200.0;
    Convention convention = Convention::RisingIsOne;
    double toleranceFraction = 0.25;
    int preambleBits = 8;

    Nanos nominal_period() const;
    void check() const;  // throws ConfigError
};

enum class DecodeStatus : std::uint8_t { Ok, NoLock, FrameAbort };

struct DecodeResult {
    DecodeStatus status = DecodeStatus::NoLock;
    Bits bits;                  // empty unless Ok
    Nanos measuredPeriod = 0;   // 0 without lock
    std::size_t discardedBits = 0;  // partial bits dropped by FrameAbort
};

PulseTrain manchester_encode(const Bits& bits, const ManchesterParams& params);
DecodeResult manchester_decode(const PulseTrain& train, const ManchesterParams& params);

// ---- framing -------------------------------------------------------------

enum class FrameType : std::uint8_t { Command = 0b01, Program = 0b10 };

inline constexpr int kCommandPayloadBits = 8;
inline constexpr int kProgramPayloadBits = 58;

struct Frame {
    FrameType type = FrameType::Command;
    Bits payload;
    bool operator==(const Frame&) const = default;
};

Bits frame_bits(const Frame& frame);  // type field + payload, no preamble
Frame command_frame(std::uint8_t value);
Frame program_frame(std::uint64_t word);
std::uint64_t payload_value(const Bits& payload);

PulseTrain encode_frame(const Frame& frame, const ManchesterParams& params);

// ---- streaming receiver --------------------------------------------------

// Edge-driven receiver shared by batch decode and the engine's comm loop.
// Raw mode collects bits until the line goes quiet; framed mode reads the
// type field and a fixed-length payload.
class ManchesterReceiver {
public:
    enum class Mode : std::uint8_t { Raw, Framed };

    struct Event {
        enum class Kind : std::uint8_t { Frame, Bits, Abort } kind;
        Frame frame;        // Kind::Frame
        Bits bits;          // Kind::Bits (raw mode)
        Nanos period = 0;
        std::size_t discarded = 0;  // Kind::Abort
        Nanos t = 0;
    };

    ManchesterReceiver(ManchesterParams params, Mode mode);

    // Feed a sampled line level; edges are detected internally.
    void sample(Nanos t, Line level);
    // Feed an explicit transition.
    void edge(Nanos t, Line newLevel);
    // Advance time without an edge (detects end of frame / timeouts).
    void idle_until(Nanos t);

    std::vector<Event> drain();
    bool locked() const { return state_ != State::Hunting; }
    const ManchesterParams& params() const { return params_; }
    void reset();

private:
    enum class State : std::uint8_t { Hunting, Locked };

    void try_lock();
    void on_locked_edge(Nanos t, bool rising);
    void push_bit(bool b, Nanos t);
    void abort(Nanos t);
    void finish_raw(Nanos t);
    bool bit_from_edge(bool rising) const;

    ManchesterParams params_;
    Mode mode_;
    Nanos nominal_;
    State state_ = State::Hunting;
    Line line_ = Line::Low;
    std::vector<std::pair<Nanos, bool>> window_;  // (t, rising) while hunting
    Nanos period_ = 0;
    Nanos lastMid_ = 0;
    bool sawBoundary_ = false;
    Bits current_;
    int expected_ = -1;  // framed payload length once the type is known
    std::vector<Event> events_;
};

}  // namespace smartlet::codec
