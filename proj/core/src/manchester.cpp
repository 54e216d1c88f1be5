#include "smartlet/manchester.hpp"

#include <cmath>
#include <cstdlib>

#include "smartlet/error.hpp"

namespace smartlet::codec {

Nanos ManchesterParams::nominal_period() const {
    return static_cast<Nanos>(std::llround(static_cast<double>(kNsPerSecond) / bitRate));
}

void ManchesterParams::check() const {
    if (!(bitRate > 0.0) || !std::isfinite(bitRate)) throw ConfigError("bitRate must be positive");
    if (!(toleranceFraction > 0.0 && toleranceFraction < 0.5))
        throw ConfigError("toleranceFraction must lie in (0, 0.5)");
    if (preambleBits < 0) throw ConfigError("preambleBits must be non-negative");
}

namespace {

// Level of the first half-cell for bit b.
Line first_half(bool b, Convention c) {
    const bool risingIsOne = c == Convention::RisingIsOne;
    return (b == risingIsOne) ? Line::Low : Line::High;
}

Line other(Line l) { return l == Line::High ? Line::Low : Line::High; }

PulseTrain encode_all(const Bits& bits, const ManchesterParams& p, int preamble) {
    p.check();
    const Nanos period = p.nominal_period();
    TrainBuilder b;
    Nanos cellStart = 0;
    auto cell = [&](bool bit) {
        const Nanos mid = cellStart + period / 2;
        const Nanos end = cellStart + period;
        const Line first = first_half(bit, p.convention);
        b.hold(first, mid - b.now());
        b.hold(other(first), end - b.now());
        cellStart = end;
    };
    for (int i = 0; i < preamble; ++i) cell(i % 2 == 0);
    for (bool bit : bits) cell(bit);
    PulseTrain t = b.finish();
    if (!t.edges.empty() && t.edges.back().level == Line::High) t.edges.push_back({t.duration, Line::Low});
    return t;
}

// Decode without a preamble: nominal cells anchored at t=0.
DecodeResult decode_unlocked(const PulseTrain& train, const ManchesterParams& p) {
    DecodeResult r;
    const Nanos period = p.nominal_period();
    const auto window = static_cast<Nanos>(p.toleranceFraction * static_cast<double>(period));
    const Nanos cells = (train.duration + period / 2) / period;
    if (cells == 0) return r;
    Line prev = Line::Low;
    std::size_t next = 0;
    for (Nanos k = 0; k < cells; ++k) {
        const Nanos mid = k * period + period / 2;
        bool found = false;
        while (next < train.edges.size() && train.edges[next].t <= mid + window) {
            const Edge& e = train.edges[next++];
            const bool transition = e.level != prev;
            prev = e.level;
            if (transition && std::llabs(e.t - mid) < window) {
                const bool rising = e.level == Line::High;
                r.bits.push_back(rising == (p.convention == Convention::RisingIsOne));
                found = true;
            }
        }
        if (!found) {
            r.status = DecodeStatus::FrameAbort;
            r.discardedBits = r.bits.size();
            r.bits.clear();
            return r;
        }
    }
    r.status = DecodeStatus::Ok;
    r.measuredPeriod = period;
    return r;
}

void feed(ManchesterReceiver& rx, const PulseTrain& train) {
    Line prev = Line::Low;
    for (const auto& e : train.edges) {
        if (e.level != prev) rx.edge(e.t, e.level);
        prev = e.level;
    }
}

}  // namespace

PulseTrain manchester_encode(const Bits& bits, const ManchesterParams& params) {
    return encode_all(bits, params, params.preambleBits);
}

DecodeResult manchester_decode(const PulseTrain& train, const ManchesterParams& params) {
    params.check();
    if (params.preambleBits == 0) return decode_unlocked(train, params);
    ManchesterReceiver rx(params, ManchesterReceiver::Mode::Raw);
    feed(rx, train);
    // the line is quiet after the train; force end-of-frame detection
    const Nanos quiet = train.duration + 4 * params.nominal_period();
    rx.idle_until(quiet);
    DecodeResult r;
    for (auto& ev : rx.drain()) {
        if (ev.kind == ManchesterReceiver::Event::Kind::Bits && ev.t < quiet) {
            // frame ended by a late edge: the period drifted mid-frame
            r.status = DecodeStatus::FrameAbort;
            r.discardedBits = ev.bits.size();
            r.measuredPeriod = ev.period;
            return r;
        }
        if (ev.kind == ManchesterReceiver::Event::Kind::Bits) {
            r.status = DecodeStatus::Ok;
            r.bits = std::move(ev.bits);
            r.measuredPeriod = ev.period;
            return r;
        }
        if (ev.kind == ManchesterReceiver::Event::Kind::Abort) {
            r.status = DecodeStatus::FrameAbort;
            r.discardedBits = ev.discarded;
            r.measuredPeriod = ev.period;
            return r;
        }
    }
    return r;
}

Bits frame_bits(const Frame& f) {
    Bits out;
    const auto type = static_cast<unsigned>(f.type);
    out.push_back((type >> 1) & 1u);
    out.push_back(type & 1u);
    out.insert(out.end(), f.payload.begin(), f.payload.end());
    return out;
}

Frame command_frame(std::uint8_t value) {
    Frame f{FrameType::Command, {}};
    for (int i = 7; i >= 0; --i) f.payload.push_back((value >> i) & 1u);
    return f;
}

Frame program_frame(std::uint64_t word) {
    Frame f{FrameType::Program, {}};
    for (int i = kProgramPayloadBits - 1; i >= 0; --i) f.payload.push_back((word >> i) & 1u);
    return f;
}

std::uint64_t payload_value(const Bits& payload) {
    std::uint64_t v = 0;
    for (bool b : payload) v = (v << 1) | static_cast<std::uint64_t>(b);
    return v;
}

PulseTrain encode_frame(const Frame& frame, const ManchesterParams& params) {
    if (params.preambleBits <= 0) throw ConfigError("framed transmission needs a preamble");
    return manchester_encode(frame_bits(frame), params);
}

// ---- receiver --------------------------------------------------------------

ManchesterReceiver::ManchesterReceiver(ManchesterParams params, Mode mode)
    : params_(params), mode_(mode), nominal_(params.nominal_period()) {
    params_.check();
    if (params_.preambleBits <= 0) throw ConfigError("streaming receiver needs a preamble");
}

void ManchesterReceiver::reset() {
    state_ = State::Hunting;
    window_.clear();
    current_.clear();
    expected_ = -1;
    sawBoundary_ = false;
    period_ = 0;
}

bool ManchesterReceiver::bit_from_edge(bool rising) const {
    return rising == (params_.convention == Convention::RisingIsOne);
}

void ManchesterReceiver::sample(Nanos t, Line level) {
    // the line idles Low, so a High first sample counts as an edge
    if (level != line_) {
        edge(t, level);
    } else {
        idle_until(t);
    }
}

void ManchesterReceiver::edge(Nanos t, Line newLevel) {
    line_ = newLevel;
    idle_until(t);
    const bool rising = newLevel == Line::High;
    if (state_ == State::Locked) {
        on_locked_edge(t, rising);
        return;
    }
    window_.emplace_back(t, rising);
    if (static_cast<int>(window_.size()) > params_.preambleBits) window_.erase(window_.begin());
    try_lock();
}

void ManchesterReceiver::try_lock() {
    const int n = params_.preambleBits;
    if (static_cast<int>(window_.size()) < n) return;
    if (!bit_from_edge(window_.front().second)) return;
    const double tol = params_.toleranceFraction * static_cast<double>(nominal_);
    for (int i = 1; i < n; ++i) {
        const Nanos d = window_[i].first - window_[i - 1].first;
        if (std::abs(static_cast<double>(d - nominal_)) > tol) return;
    }
    period_ = n > 1 ? (window_.back().first - window_.front().first) / (n - 1) : nominal_;
    lastMid_ = window_.back().first;
    sawBoundary_ = false;
    current_.clear();
    expected_ = -1;
    window_.clear();
    state_ = State::Locked;
}

void ManchesterReceiver::on_locked_edge(Nanos t, bool rising) {
    const double p = static_cast<double>(period_);
    const double tol = params_.toleranceFraction * p;
    const double d = static_cast<double>(t - lastMid_);
    if (std::abs(d - p / 2) < tol && !sawBoundary_) {
        sawBoundary_ = true;
        return;
    }
    if (std::abs(d - p) < tol) {
        lastMid_ = t;
        sawBoundary_ = false;
        push_bit(bit_from_edge(rising), t);
        return;
    }
    abort(t);
    // the offending edge may start the next preamble
    window_.emplace_back(t, rising);
    try_lock();
}

void ManchesterReceiver::push_bit(bool b, Nanos t) {
    current_.push_back(b);
    if (mode_ == Mode::Raw) return;
    if (expected_ < 0) {
        if (current_.size() < 2) return;
        const unsigned type = (static_cast<unsigned>(current_[0]) << 1) | current_[1];
        if (type == static_cast<unsigned>(FrameType::Command)) {
            expected_ = kCommandPayloadBits;
        } else if (type == static_cast<unsigned>(FrameType::Program)) {
            expected_ = kProgramPayloadBits;
        } else {
            abort(t);
            return;
        }
        return;
    }
    if (static_cast<int>(current_.size()) == 2 + expected_) {
        Event ev{Event::Kind::Frame, {}, {}, period_, 0, t};
        ev.frame.type = static_cast<FrameType>((static_cast<unsigned>(current_[0]) << 1) | current_[1]);
        ev.frame.payload.assign(current_.begin() + 2, current_.end());
        events_.push_back(std::move(ev));
        reset();
    }
}

void ManchesterReceiver::abort(Nanos t) {
    events_.push_back({Event::Kind::Abort, {}, {}, period_, current_.size(), t});
    reset();
}

void ManchesterReceiver::finish_raw(Nanos t) {
    events_.push_back({Event::Kind::Bits, {}, std::move(current_), period_, 0, t});
    reset();
}

void ManchesterReceiver::idle_until(Nanos t) {
    if (state_ != State::Locked) return;
    const double limit = (1.0 + params_.toleranceFraction) * static_cast<double>(period_);
    if (static_cast<double>(t - lastMid_) <= limit) return;
    if (mode_ == Mode::Raw && !current_.empty()) {
        finish_raw(t);
    } else {
        abort(t);
    }
}

std::vector<ManchesterReceiver::Event> ManchesterReceiver::drain() {
    std::vector<Event> out;
    out.swap(events_);
    return out;
}

}  // namespace smartlet::codec
