#include <doctest.h>

#include <sstream>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "control.hpp"
#include "fixtures.hpp"
#include "ws_server.hpp"

using namespace smartlet;
using namespace smartlet::tools;
using nlohmann::json;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;

namespace {

engine::Scenario fig4ab() { return engine::load_scenario(fixtures::path("scenarios/fig4ab.json")); }

std::vector<json> parsed(const std::vector<std::string>& v) {
    std::vector<json> out;
    for (const auto& s : v) out.push_back(json::parse(s));
    return out;
}

int count_type(const std::vector<json>& v, const std::string& type) {
    int n = 0;
    for (const auto& j : v) n += j.at("type") == type;
    return n;
}

const std::string kStart200 = R"({"v":1,"type":"command","kind":"global_light","rate_hz":200,"payload":"START","duration_s":0.2})";

struct Client {
    asio::io_context ioc;
    websocket::stream<asio::ip::tcp::socket> ws{ioc};

    explicit Client(unsigned short port) {
        asio::ip::tcp::resolver resolver(ioc);
        asio::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws.handshake("127.0.0.1", "/");
    }
    json read() {
        beast::flat_buffer buf;
        ws.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    }
    void send(const std::string& text) { ws.write(asio::buffer(text)); }
    // Reads until a message of `type` arrives; returns everything read.
    std::vector<json> read_until(const std::string& type) {
        std::vector<json> got;
        do got.push_back(read());
        while (got.back().at("type") != type);
        return got;
    }
};

}  // namespace

TEST_SUITE("service") {

TEST_CASE("starts paused; step x10 gives ten snapshots and advances ten strides") {
    ControlService svc(fig4ab(), {});
    CHECK(svc.paused());
    CHECK(svc.advance(1.0).empty());
    int snapshots = 0;
    for (int i = 0; i < 10; ++i) {
        const auto out = svc.handle(R"({"type":"control","action":"step"})", i);
        REQUIRE(out.reply.size() == 1);
        CHECK(json::parse(out.reply[0]) == json{{"type", "ack"}, {"ref", i}});
        snapshots += count_type(parsed(out.broadcast), "state");
    }
    CHECK(snapshots == 10);
    CHECK(svc.tick() == 10 * 100);
}

TEST_CASE("a 200 Hz START acks and only the 200 Hz agent starts running") {
    ControlService svc(fig4ab(), {});
    auto out = svc.handle(R"({"v":1,"id":"c1","type":"command","kind":"global_light","rate_hz":200,"payload":"START"})", 0);
    REQUIRE(out.reply.size() == 1);
    CHECK(json::parse(out.reply[0]) == json{{"type", "ack"}, {"ref", "c1"}});
    std::vector<json> events;
    for (int i = 0; i < 8; ++i)
        for (const auto& j : parsed(svc.handle(R"({"type":"control","action":"step"})", i + 1).broadcast))
            if (j.at("type") == "event") events.push_back(j);
    int running2 = 0, running3 = 0;
    for (const auto& e : events)
        if (e.at("event") == "ModeChanged" && e.at("mode") == "Running") {
            running2 += e.at("agents") == json{2};
            running3 += e.at("agents") == json{3};
        }
    CHECK(running3 == 1);
    CHECK(running2 == 0);
}

TEST_CASE("malformed messages get an error and the session continues") {
    ControlService svc(fig4ab(), {});
    for (const char* bad : {"not json", "[1,2]", R"({"v":2,"type":"control","action":"step"})",
                            R"({"type":"control","action":"jump"})", R"({"type":"control","action":"speed","value":-1})",
                            R"({"type":"teleport"})", R"({"type":"command","payload":"MAYBE"})",
                            R"({"type":"command","payload":"START","rate_hz":5000})",
                            R"({"type":"program","agent":2,"bits":"01"})"}) {
        INFO(bad);
        const auto out = svc.handle(bad, 7);
        REQUIRE(out.reply.size() == 1);
        CHECK(json::parse(out.reply[0]).at("type") == "error");
    }
    CHECK(svc.tick() == 0);
    const auto ok = svc.handle(R"({"type":"control","action":"step"})", 8);
    CHECK(json::parse(ok.reply[0]).at("type") == "ack");
}

TEST_CASE("resume, speed and pause drive wall-clock advancement") {
    ControlService svc(fig4ab(), {});
    svc.handle(R"({"type":"control","action":"speed","value":10})", 0);
    CHECK(svc.speed() == 10);
    svc.handle(R"({"type":"control","action":"resume"})", 1);
    CHECK_FALSE(svc.paused());
    const auto out = parsed(svc.advance(0.1));
    CHECK(svc.tick() == 1000);
    CHECK(count_type(out, "state") == 1);
    CHECK(count_type(parsed(svc.advance(0.001)), "state") == 0);  // snapshot rate cap
    svc.handle(R"({"type":"control","action":"pause"})", 2);
    CHECK(svc.advance(1.0).empty());
}

TEST_CASE("reset rebuilds the world and pauses") {
    ControlService svc(fig4ab(), {});
    svc.handle(R"({"type":"control","action":"step"})", 0);
    const auto out = svc.handle(R"({"type":"control","action":"reset"})", 1);
    CHECK(json::parse(out.reply[0]).at("type") == "ack");
    REQUIRE(out.broadcast.size() == 1);
    CHECK(json::parse(out.broadcast[0]).at("tick") == 0);
    CHECK(svc.tick() == 0);
    CHECK(svc.paused());
}

TEST_CASE("a served session replays headlessly to the same bytes") {
    std::ostringstream served;
    {
        ControlService svc(fig4ab(), {}, &served);
        svc.handle(R"({"type":"control","action":"step"})", 0);
        svc.handle(kStart200, 1);
        svc.handle(R"({"type":"control","action":"speed","value":50})", 2);
        svc.handle(R"({"type":"control","action":"resume"})", 3);
        for (int i = 0; i < 20; ++i) svc.advance(1.0 / 30);
        svc.handle(R"({"type":"control","action":"pause"})", 4);
        svc.handle(R"({"id":9,"type":"command","kind":"global_light","rate_hz":50,"payload":"START"})", 5);
        svc.handle(R"({"type":"program","agent":3,"bits":"0000111111111011110010000000000001110010000000000001110010"})", 6);
        svc.handle(R"({"type":"control","action":"reset"})", 7);
        for (int i = 0; i < 3; ++i) svc.handle(R"({"type":"control","action":"step"})", 8 + i);
        svc.finish();
        svc.finish();
    }
    std::istringstream in(served.str());
    const auto plan = engine::replay_plan(engine::read_trace(in));
    std::ostringstream again;
    engine::RunOptions opt;
    opt.seed = plan.seed;
    opt.ticks = plan.ticks;
    engine::run_scenario(plan.scenario, again, opt, plan.script);
    CHECK(again.str() == served.str());
}

TEST_CASE("two WebSocket consoles receive identical state streams") {
    ControlService svc(fig4ab(), {});
    WsServer server(svc, 0);
    std::thread io([&] { server.run(); });
    {
        Client a(server.port()), b(server.port());
        const json a0 = a.read(), b0 = b.read();
        CHECK(a0.at("type") == "state");
        CHECK(a0 == b0);

        a.send(kStart200);
        std::vector<json> fromA = a.read_until("ack");
        for (int i = 0; i < 10; ++i) {
            a.send(R"({"type":"control","action":"step"})");
            for (const auto& j : a.read_until("state")) fromA.push_back(j);
        }
        std::vector<json> fromB;
        for (int i = 0; i < 10; ++i)
            for (const auto& j : b.read_until("state")) fromB.push_back(j);

        auto states = [](const std::vector<json>& v) {
            std::vector<json> s;
            for (const auto& j : v)
                if (j.at("type") == "state" || j.at("type") == "event") s.push_back(j);
            return s;
        };
        CHECK(count_type(fromA, "state") == 10);
        CHECK(states(fromA) == states(fromB));
        CHECK(states(fromB).back().at("tick") == 1000);

        b.send("{oops");
        CHECK(b.read().at("type") == "error");
        b.send(R"({"type":"control","action":"step"})");
        CHECK(b.read_until("state").back().at("tick") == 1100);
        a.ws.close(websocket::close_code::normal);
        b.ws.close(websocket::close_code::normal);
    }
    server.stop();
    io.join();
}

TEST_CASE("serve exits 4 when the port is busy") {
    asio::io_context ioc;
    asio::ip::tcp::acceptor hold(ioc, {asio::ip::make_address("127.0.0.1"), 0});
    const std::string port = std::to_string(hold.local_endpoint().port());
    const std::string scenario = fixtures::path("scenarios/fig4ab.json");
    const char* argv[] = {"smartlet", "serve", "--scenario", scenario.c_str(), "--port", port.c_str()};
    std::ostringstream out, err;
    CHECK(run_cli(6, argv, out, err) == kExitPortBusy);
    CHECK(err.str().find("cannot listen") != std::string::npos);
}

}  // TEST_SUITE
