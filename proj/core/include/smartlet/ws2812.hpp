#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "smartlet/manchester.hpp"
#include "smartlet/pulse_train.hpp"

namespace smartlet::codec {

struct Ws2812Timing {
    Nanos t0h = 400;
    Nanos t1h = 800;
    Nanos t0l = 850;
    Nanos t1l = 450;
    Nanos reset = 50'000;
    Nanos tolerance = 150;
    Nanos period = 1250;
    Nanos periodTolerance = 600;
};

struct Pixel {
    std::uint8_t g = 0, r = 0, b = 0;
    std::uint32_t word() const { return (std::uint32_t{g} << 16) | (std::uint32_t{r} << 8) | b; }
    bool operator==(const Pixel&) const = default;
};

PulseTrain ws2812_encode(const std::vector<Pixel>& pixels, const Ws2812Timing& timing = {});
PulseTrain ws2812_encode_bits(const Bits& bits, const Ws2812Timing& timing = {});

enum class Ws2812Status : std::uint8_t { Ok, TimingViolation, FrameUnderrun };

struct Ws2812Decode {
    Ws2812Status status = Ws2812Status::Ok;
    Bits bits;
    std::size_t badSegment = 0;  // index of the offending edge entry
};

// Decode bits up to the first reset Low.
Ws2812Decode ws2812_decode(const PulseTrain& train, const Ws2812Timing& timing = {});

struct CascadeResult {
    Ws2812Status status = Ws2812Status::Ok;
    std::uint32_t latched = 0;  // GRB word
    PulseTrain forwarded;
};

CascadeResult ws2812_cascade(const PulseTrain& input, const Ws2812Timing& timing = {});

}  // namespace smartlet::codec
