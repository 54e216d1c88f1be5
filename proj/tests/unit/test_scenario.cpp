#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "smartlet/scenario.hpp"

using namespace smartlet;
using namespace smartlet::engine;

namespace {

// Line number reported for a malformed scenario.
int error_line(const std::string& text) {
    try {
        parse_scenario(text, "t.json");
    } catch (const ScenarioError& e) {
        return e.line;
    }
    return -1;
}

std::string error_text(const std::string& text) {
    try {
        parse_scenario(text, "t.json");
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("fixture scenarios load") {
    for (const char* name : {"fig3.json", "fig4ab.json", "fig4cd.json", "nomatch.json", "empty.json"}) {
        INFO(name);
        CHECK_NOTHROW(load_scenario(fixtures::path(std::string("scenarios/") + name)));
    }
    const Scenario s = load_scenario(fixtures::path("scenarios/fig3.json"));
    CHECK(s.seed == 42);
    CHECK(s.total_ticks() == 120000);
    REQUIRE(s.agents.size() == 2);
    CHECK(s.agents[0].tethered);
    CHECK(s.agents[1].position.x == doctest::Approx(0.017));
    CHECK(s.agents[1].program.has_value());
    CHECK(s.agents[1].opdFaces[1] == Face::PosX);
    REQUIRE(s.schedule.size() == 1);
    CHECK(s.schedule[0].source == LightEvent::Source::Agent);
    CHECK(s.schedule[0].payload.command == fsm::command::Start);
}

TEST_CASE("defaults for an empty object") {
    const Scenario s = parse_scenario("{}");
    CHECK(s.agents.empty());
    CHECK(s.physicsDt == 1e-3);
    CHECK(s.commDt == 1e-4);
    CHECK(s.total_ticks() == 10000);
}

TEST_CASE("syntax errors carry the offending line") {
    CHECK(error_line("{\n  \"seed\": 1,\n  \"duration_s\": ,\n}") == 3);
    CHECK(error_text("{\n\"seed\": 1\n").rfind("t.json:", 0) == 0);
}

TEST_CASE("semantic errors point at the offending key, inside arrays too") {
    const std::string text = R"({
  "agents": [
    {"id": 1, "decoder_rate_hz": 200},
    {"id": 2,
     "decoder_rate_hz": -5}
  ]
})";
    CHECK(error_line(text) == 5);
    CHECK(error_text(text).find("/agents/1/decoder_rate_hz") != std::string::npos);
}

TEST_CASE("unknown keys are rejected with their location") {
    const std::string text = "{\n  \"name\": \"x\",\n  \"speed\": 3\n}";
    CHECK(error_line(text) == 3);
    CHECK(error_text(text).find("unknown key 'speed'") != std::string::npos);
    CHECK(error_line("{\"agents\": [{\"id\": 1,\n \"colour\": 1}]}") == 2);
}

TEST_CASE("value rules") {
    CHECK(error_text(R"({"comm_dt_s": 3e-4})").find("divide") != std::string::npos);
    CHECK(error_text(R"({"seed": -1})").find("seed") != std::string::npos);
    CHECK(error_text(R"({"agents": [{"id": 1}, {"id": 1}]})").find("duplicate") != std::string::npos);
    CHECK(error_text(R"({"agents": [{"id": 1, "position_mm": [90, 1, 1]}]})").find("outside") != std::string::npos);
    CHECK(error_text(R"({"agents": [{"id": 1, "program": "0101"}]})").find("58") != std::string::npos);
    CHECK(error_text(R"({"schedule": [{"rate_hz": 2000, "payload": "START"}]})").find("[1, 1000]") != std::string::npos);
    CHECK(error_text(R"({"schedule": [{"payload": "0xZZ"}]})").find("payload") != std::string::npos);
    CHECK(error_text(R"({"schedule": [{"source": "agent", "agent": 4, "payload": "STOP"}]})").find("no agent") !=
          std::string::npos);
    CHECK(error_text(R"({"agents": [{"id": 1, "green_led_face": "up"}]})").find("unknown face") != std::string::npos);
}

TEST_CASE("payload parsing") {
    CHECK(Payload::parse("START").command == fsm::command::Start);
    CHECK(Payload::parse("0x5a").command == fsm::command::Stop);
    CHECK(Payload::parse("11000011").command == fsm::command::Send);
    const Payload p = Payload::parse(fsm::to_bits(fsm::canonical_dive_program()));
    CHECK(p.kind == Payload::Kind::Program);
    CHECK(p.program == fsm::serialize(fsm::canonical_dive_program()));
    CHECK(Payload::parse(p.text()).program == p.program);
    CHECK(Payload::parse("STOP").text() == "STOP");
    CHECK_THROWS_AS(Payload::parse("GO"), ConfigError);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/x.json"), ScenarioError);
}

}  // TEST_SUITE
