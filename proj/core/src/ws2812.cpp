#include "smartlet/ws2812.hpp"

#include <cstdlib>

namespace smartlet::codec {

PulseTrain ws2812_encode_bits(const Bits& bits, const Ws2812Timing& tm) {
    TrainBuilder b;
    for (bool bit : bits) {
        b.hold(Line::High, bit ? tm.t1h : tm.t0h);
        b.hold(Line::Low, bit ? tm.t1l : tm.t0l);
    }
    if (!bits.empty()) b.hold(Line::Low, tm.reset);
    return b.finish();
}

PulseTrain ws2812_encode(const std::vector<Pixel>& pixels, const Ws2812Timing& tm) {
    Bits bits;
    bits.reserve(pixels.size() * 24);
    for (const auto& px : pixels) {
        const std::uint32_t w = px.word();
        for (int i = 23; i >= 0; --i) bits.push_back((w >> i) & 1u);
    }
    return ws2812_encode_bits(bits, tm);
}

Ws2812Decode ws2812_decode(const PulseTrain& train, const Ws2812Timing& tm) {
    Ws2812Decode out;
    const auto& e = train.edges;
    auto within = [&](Nanos v, Nanos nominal) { return std::llabs(v - nominal) <= tm.tolerance; };
    auto fail = [&](std::size_t idx) {
        out.status = Ws2812Status::TimingViolation;
        out.badSegment = idx;
        return out;
    };

    std::size_t i = 0;
    while (i < e.size() && e[i].level == Line::Low) ++i;  // idle before the frame
    for (; i < e.size(); i += 2) {
        if (e[i].level != Line::High) return fail(i);
        const Nanos lowStart = i + 1 < e.size() ? e[i + 1].t : train.duration;
        const Nanos high = lowStart - e[i].t;
        bool bit;
        if (within(high, tm.t0h)) {
            bit = false;
        } else if (within(high, tm.t1h)) {
            bit = true;
        } else {
            return fail(i);
        }
        if (i + 1 >= e.size()) return fail(i);  // ends while High
        const Nanos low = (i + 2 < e.size() ? e[i + 2].t : train.duration) - lowStart;
        if (low >= tm.reset) {
            out.bits.push_back(bit);
            return out;  // latch
        }
        const bool lastSegment = i + 2 >= e.size();
        if (!within(low, bit ? tm.t1l : tm.t0l) || std::llabs(high + low - tm.period) > tm.periodTolerance) {
            return fail(i + 1);
        }
        out.bits.push_back(bit);
        if (lastSegment) return out;
    }
    return out;
}

CascadeResult ws2812_cascade(const PulseTrain& input, const Ws2812Timing& tm) {
    CascadeResult r;
    const Ws2812Decode d = ws2812_decode(input, tm);
    if (d.status != Ws2812Status::Ok) {
        r.status = d.status;
        return r;
    }
    if (d.bits.size() < 24) {
        r.status = Ws2812Status::FrameUnderrun;
        return r;
    }
    for (int i = 0; i < 24; ++i) r.latched = (r.latched << 1) | static_cast<std::uint32_t>(d.bits[i]);
    const Bits rest(d.bits.begin() + 24, d.bits.end());
    r.forwarded = ws2812_encode_bits(rest, tm);
    return r;
}

}  // namespace smartlet::codec
