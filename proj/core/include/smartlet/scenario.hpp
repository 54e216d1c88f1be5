#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "smartlet/aquatics.hpp"
#include "smartlet/docking.hpp"
#include "smartlet/error.hpp"
#include "smartlet/lablet_fsm.hpp"
#include "smartlet/optical_link.hpp"
#include "smartlet/photonics.hpp"

namespace smartlet::engine {

// Scenario problem with a source location (line 0 when unknown).
struct ScenarioError : ConfigError {
    ScenarioError(const std::string& origin, int line, const std::string& what);
    int line;
};

struct Payload {
    enum class Kind : std::uint8_t { Command, Program } kind = Kind::Command;
    std::uint8_t command = 0;
    std::uint64_t program = 0;

    // "START" | "STOP" | "SEND" | "0xNN" | 8-bit or 58-bit binary string.
    static Payload parse(std::string_view text);  // throws ConfigError
    std::string text() const;
};

struct LightEvent {
    enum class Source : std::uint8_t { Global, Agent } source = Source::Global;
    double t = 0;  // s
    int agent = -1;
    double rateHz = 200;
    Payload payload;
    double duration = 0;  // s
};

struct AgentConfig {
    int id = 0;
    std::string name;
    Vec3 position;  // m, centre
    aquatics::BodyParams body;
    double initialGas = 0;  // m³
    std::optional<fsm::LabletProgram> program;
    double decoderRate = 200;
    double decoderTolerance = 0.25;
    double slowClockHz = 20;
    double fastClockHz = 400;
    bool tethered = false;
    std::array<aquatics::FacePattern, kFaceCount> faces{};
    Face greenLedFace = Face::NegX;
    std::array<Face, 2> opdFaces{Face::PosZ, Face::PosX};
    photonics::OpticalLinkParams link;
    double restingDraw = 2e-9;  // W
    double faradayEfficiency = 1.0;
};

struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 0;
    double duration = 10;  // s
    double physicsDt = 1e-3;
    double commDt = 1e-4;
    int decimation = 100;
    aquatics::Tank tank;
    aquatics::WaterParams water;
    std::vector<photonics::LightSource> suns;
    double globalLightIrradiance = 1e-5;  // W/cm²
    std::vector<AgentConfig> agents;
    std::vector<LightEvent> schedule;
    nlohmann::json source;  // as parsed, embedded in trace headers

    std::int64_t total_ticks() const;
};

Scenario parse_scenario(std::string_view text, const std::string& origin = "<scenario>");
Scenario scenario_from_json(const nlohmann::json& j, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);

Face parse_face(std::string_view name);  // "+x" ... "-z"

}  // namespace smartlet::engine
