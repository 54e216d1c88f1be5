#include "smartlet/pulse_train.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "smartlet/error.hpp"

namespace smartlet::codec {

Line PulseTrain::level_at(Nanos t) const {
    Line l = Line::Low;
    for (const auto& e : edges) {
        if (e.t > t) break;
        l = e.level;
    }
    return l;
}

void validate(const PulseTrain& train) {
    for (std::size_t i = 0; i < train.edges.size(); ++i) {
        const auto& e = train.edges[i];
        if (i == 0) {
            if (e.t < 0) throw DomainError("first edge before t=0");
            continue;
        }
        const auto& prev = train.edges[i - 1];
        if (e.t <= prev.t) throw DomainError("edge times not strictly increasing at index " + std::to_string(i));
        if (e.level == prev.level) throw DomainError("levels do not alternate at index " + std::to_string(i));
    }
    if (!train.edges.empty() && train.duration < train.edges.back().t)
        throw DomainError("duration precedes last edge");
}

void TrainBuilder::hold(Line level, Nanos length) {
    if (length <= 0) return;
    if (train_.edges.empty() || train_.edges.back().level != level) train_.edges.push_back({now_, level});
    now_ += length;
}

PulseTrain TrainBuilder::finish() {
    train_.duration = now_;
    return std::move(train_);
}

void write_csv(std::ostream& out, const PulseTrain& train) {
    out << "time_ns,level\n";
    for (const auto& e : train.edges) out << e.t << ',' << (e.level == Line::High ? 1 : 0) << '\n';
    out << train.duration << ",end\n";
}

PulseTrain read_csv(std::istream& in) {
    PulseTrain train;
    std::string line;
    int lineNo = 0;
    bool sawEnd = false;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (lineNo == 1 && line.rfind("time_ns", 0) == 0)) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DomainError("line " + std::to_string(lineNo) + ": expected time_ns,level");
        Nanos t = 0;
        try {
            t = std::stoll(line.substr(0, comma));
        } catch (const std::exception&) {
            throw DomainError("line " + std::to_string(lineNo) + ": bad time");
        }
        const std::string lv = line.substr(comma + 1);
        if (lv == "end") {
            train.duration = t;
            sawEnd = true;
        } else if (lv == "0" || lv == "1") {
            train.edges.push_back({t, lv == "1" ? Line::High : Line::Low});
        } else {
            throw DomainError("line " + std::to_string(lineNo) + ": level must be 0, 1 or end");
        }
    }
    if (!sawEnd) train.duration = train.edges.empty() ? 0 : train.edges.back().t;
    validate(train);
    return train;
}

}  // namespace smartlet::codec
