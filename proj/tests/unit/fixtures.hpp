#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smartlet/pulse_train.hpp"

namespace fixtures {

inline std::string path(const std::string& rel) { return std::string(SMARTLET_FIXTURES) + "/" + rel; }

inline std::string read(const std::string& rel) {
    std::ifstream in(path(rel), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json json(const std::string& rel) { return nlohmann::json::parse(read(rel)); }

inline std::vector<nlohmann::json> jsonl(const std::string& rel) {
    std::vector<nlohmann::json> out;
    std::istringstream in(read(rel));
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(nlohmann::json::parse(line));
    return out;
}

inline smartlet::codec::PulseTrain train(const nlohmann::json& edges, smartlet::codec::Nanos duration) {
    smartlet::codec::PulseTrain t;
    for (const auto& e : edges)
        t.edges.push_back({e[0].get<smartlet::codec::Nanos>(),
                           e[1].get<int>() ? smartlet::codec::Line::High : smartlet::codec::Line::Low});
    t.duration = duration;
    return t;
}

}  // namespace fixtures
