#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace smartlet::codec {

using Nanos = std::int64_t;
inline constexpr Nanos kNsPerSecond = 1'000'000'000;

enum class Line : std::uint8_t { Low = 0, High = 1 };

struct Edge {
    Nanos t = 0;
    Line level = Line::Low;  // level from t onwards
    bool operator==(const Edge&) const = default;
};

// Timestamped binary waveform. The first entry sets the initial level;
// later entries are transitions.
struct PulseTrain {
    std::vector<Edge> edges;
    Nanos duration = 0;

    bool empty() const { return edges.empty(); }
    Line level_at(Nanos t) const;  // Low before the first entry
    bool operator==(const PulseTrain&) const = default;
};

// Throws DomainError when times are not strictly increasing, levels do not
// alternate, or duration precedes the last edge.
void validate(const PulseTrain& train);

// Builder that collapses redundant levels and zero-length segments.
class TrainBuilder {
public:
    void hold(Line level, Nanos length);
    PulseTrain finish();
    Nanos now() const { return now_; }

private:
    PulseTrain train_;
    Nanos now_ = 0;
};

// CSV interchange: header "time_ns,level", one edge per row, a final
// "<duration>,end" row.
void write_csv(std::ostream& out, const PulseTrain& train);
PulseTrain read_csv(std::istream& in);  // throws DomainError

}  // namespace smartlet::codec
