#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <boost/system/system_error.hpp>
#include <CLI11.hpp>

#include "control.hpp"
#include "smartlet/lablet_fsm.hpp"
#include "smartlet/manchester.hpp"
#include "smartlet/photonics.hpp"
#include "smartlet/trace.hpp"
#include "smartlet/ws2812.hpp"
#include "ws_server.hpp"

namespace smartlet::tools {

using nlohmann::json;

namespace {

// Output goes to `path`, or to `fallback` for "" / "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (path.empty() || path == "-") return;
        file_.open(path, std::ios::binary);
        if (!file_) throw TraceIoError("cannot open '" + path + "' for writing");
        out_ = &file_;
    }
    std::ostream& get() { return *out_; }
    void close() {
        out_->flush();
        if (!*out_) throw TraceIoError("write failed");
    }

private:
    std::ofstream file_;
    std::ostream* out_;
};

std::string slurp(const std::string& path) {
    if (path.empty() || path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

codec::PulseTrain read_train(const std::string& path) {
    std::istringstream in(slurp(path));
    return codec::read_csv(in);
}

codec::Bits parse_bitstring(const std::string& text) {
    codec::Bits bits;
    for (char c : text) {
        if (c != '0' && c != '1') throw ConfigError("bit string may contain only '0' and '1'");
        bits.push_back(c == '1');
    }
    return bits;
}

std::string bits_text(const codec::Bits& bits) {
    std::string s;
    for (bool b : bits) s += b ? '1' : '0';
    return s;
}

const char* status_name(codec::DecodeStatus s) {
    switch (s) {
        case codec::DecodeStatus::Ok: return "Ok";
        case codec::DecodeStatus::NoLock: return "NoLock";
        case codec::DecodeStatus::FrameAbort: return "FrameAbort";
    }
    return "?";
}

const char* status_name(codec::Ws2812Status s) {
    switch (s) {
        case codec::Ws2812Status::Ok: return "Ok";
        case codec::Ws2812Status::TimingViolation: return "TimingViolation";
        case codec::Ws2812Status::FrameUnderrun: return "FrameUnderrun";
    }
    return "?";
}

std::string hex24(std::uint32_t v) {
    std::ostringstream s;
    s << std::uppercase << std::hex << std::setw(6) << std::setfill('0') << (v & 0xFFFFFF);
    return s.str();
}

std::vector<codec::Pixel> parse_grb(const std::string& text) {
    std::vector<codec::Pixel> px;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.size() != 6 || item.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
            throw ConfigError("pixel must be 6 hex digits (GGRRBB): '" + item + "'");
        const auto v = static_cast<std::uint32_t>(std::stoul(item, nullptr, 16));
        px.push_back({static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)});
    }
    if (px.empty()) throw ConfigError("no pixels given");
    return px;
}

// ---- run / replay -------------------------------------------------------------

struct RunArgs {
    std::string scenario, trace, csv, script;
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

std::vector<engine::ScriptedCommand> load_script(const std::string& path) {
    std::vector<engine::ScriptedCommand> out;
    if (path.empty()) return out;
    std::istringstream in(slurp(path));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            out.push_back({j.at("tick").get<std::int64_t>(), j.at("msg")});
        } catch (const json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
    engine::Scenario scenario;
    std::vector<engine::ScriptedCommand> script;
    try {
        scenario = engine::load_scenario(a.scenario);
        script = load_script(a.script);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
    try {
        std::ostringstream buffer;
        std::ofstream file;
        std::ostream* sink = &buffer;
        if (!a.trace.empty()) {
            file.open(a.trace, std::ios::binary);
            if (!file) throw TraceIoError("cannot open trace '" + a.trace + "'");
            sink = &file;
        }
        std::optional<Sink> csv;
        engine::RunOptions opt;
        opt.seed = a.seed;
        opt.threads = a.threads;
        if (!a.csv.empty()) {
            csv.emplace(a.csv, out);
            csv->get() << "t_s,id,x_mm,y_mm,z_mm,gas_nl,mode,phase,bge,at_surface\n";
            opt.observer = [&](const engine::World& w) {
                if (w.tick() % w.scenario().decimation != 0) return;
                for (const auto& ag : w.agents()) {
                    const auto& p = ag.body.position;
                    csv->get() << w.time() << ',' << ag.cfg.id << ',' << p.x * 1e3 << ',' << p.y * 1e3 << ','
                               << p.z * 1e3 << ',' << ag.body.gasVolume * 1e12 << ',' << fsm::to_string(ag.fsm.mode)
                               << ',' << ag.fsm.phase << ',' << ag.bge << ',' << ag.body.atSurface << '\n';
                }
            };
        }
        const auto summary = engine::run_scenario(scenario, *sink, opt, script);
        if (csv) csv->close();
        std::string bytes;
        if (a.trace.empty()) {
            bytes = buffer.str();
        } else {
            file.close();
            if (!file) throw TraceIoError("trace close failed");
            bytes = slurp(a.trace);
        }
        out << json{{"ticks", summary.ticks},
                    {"events", summary.events},
                    {"records", summary.records},
                    {"hash", engine::hash_hex(engine::trace_hash(bytes))}}
                   .dump()
            << '\n';
        return kExitOk;
    } catch (const TraceIoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitTraceIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
}

int cmd_replay(const std::string& tracePath, bool verify, const std::string& outPath, int threads, std::ostream& out,
               std::ostream& err) {
    try {
        std::string original;
        try {
            original = slurp(tracePath);
        } catch (const ConfigError& e) {
            throw TraceIoError(e.what());
        }
        std::istringstream in(original);
        const auto plan = engine::replay_plan(engine::read_trace(in));
        std::ostringstream replayed;
        engine::RunOptions opt;
        opt.seed = plan.seed;
        opt.threads = threads;
        opt.ticks = plan.ticks;
        engine::run_scenario(plan.scenario, replayed, opt, plan.script);
        const std::string bytes = replayed.str();
        if (!outPath.empty()) {
            Sink s(outPath, out);
            s.get() << bytes;
            s.close();
        }
        const auto h0 = engine::trace_hash(original), h1 = engine::trace_hash(bytes);
        std::istringstream rin(bytes);
        const auto events = engine::trace_events(engine::read_trace(rin));
        out << json{{"original", engine::hash_hex(h0)},
                    {"replayed", engine::hash_hex(h1)},
                    {"identical", original == bytes},
                    {"events", events.size()}}
                   .dump()
            << '\n';
        if (verify && original != bytes) {
            err << "error: replayed trace differs from the recording\n";
            return kExitFailure;
        }
        return kExitOk;
    } catch (const TraceIoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitTraceIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
}

int cmd_serve(const RunArgs& a, int port, const std::string& address, std::ostream& out, std::ostream& err) {
    engine::Scenario scenario;
    try {
        scenario = engine::load_scenario(a.scenario);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
    std::ofstream trace;
    if (!a.trace.empty()) {
        trace.open(a.trace, std::ios::binary);
        if (!trace) {
            err << "error: cannot open trace '" << a.trace << "'\n";
            return kExitTraceIo;
        }
    }
    engine::RunOptions opt;
    opt.seed = a.seed;
    opt.threads = a.threads;
    ControlService service(std::move(scenario), opt, a.trace.empty() ? nullptr : &trace);
    std::optional<WsServer> server;
    try {
        server.emplace(service, static_cast<unsigned short>(port), address);
    } catch (const boost::system::system_error& e) {
        err << "error: cannot listen on " << address << ':' << port << ": " << e.code().message() << '\n';
        return kExitPortBusy;
    }
    out << "listening on " << address << ':' << server->port() << std::endl;
    try {
        server->run(true);
        service.finish();
    } catch (const TraceIoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitTraceIo;
    }
    return kExitOk;
}

// ---- codecs -----------------------------------------------------------------

int cmd_manchester_encode(const std::string& bits, const std::string& command, const std::string& program,
                          const codec::ManchesterParams& p, bool raw, const std::string& outPath, std::ostream& out) {
    codec::PulseTrain train;
    if (!command.empty()) {
        const auto payload = engine::Payload::parse(command);
        if (payload.kind != engine::Payload::Kind::Command) throw ConfigError("--command expects an 8-bit command");
        train = raw ? codec::manchester_encode(codec::frame_bits(codec::command_frame(payload.command)), p)
                    : codec::encode_frame(codec::command_frame(payload.command), p);
    } else if (!program.empty()) {
        const auto word = fsm::bits_to_word(program);
        fsm::deserialize(word);
        train = raw ? codec::manchester_encode(codec::frame_bits(codec::program_frame(word)), p)
                    : codec::encode_frame(codec::program_frame(word), p);
    } else {
        train = codec::manchester_encode(parse_bitstring(bits), p);
    }
    Sink s(outPath, out);
    codec::write_csv(s.get(), train);
    s.close();
    return kExitOk;
}

int cmd_manchester_decode(const std::string& in, const codec::ManchesterParams& p, bool framed, std::ostream& out) {
    const auto train = read_train(in);
    const auto r = codec::manchester_decode(train, p);
    json j = {{"status", status_name(r.status)},
              {"bits", bits_text(r.bits)},
              {"measured_period_ns", r.measuredPeriod},
              {"discarded_bits", r.discardedBits}};
    if (framed && r.status == codec::DecodeStatus::Ok) {
        if (r.bits.size() == 2 + codec::kCommandPayloadBits && !r.bits[0] && r.bits[1]) {
            engine::Payload pl;
            pl.command = static_cast<std::uint8_t>(
                codec::payload_value(codec::Bits(r.bits.begin() + 2, r.bits.end())));
            j["frame"] = {{"type", "command"}, {"payload", pl.text()}};
        } else if (r.bits.size() == 2 + codec::kProgramPayloadBits && r.bits[0] && !r.bits[1]) {
            j["frame"] = {{"type", "program"},
                          {"payload", fsm::word_to_bits(codec::payload_value(codec::Bits(r.bits.begin() + 2, r.bits.end())))}};
        } else {
            j["frame"] = nullptr;
        }
    }
    out << j.dump() << '\n';
    return r.status == codec::DecodeStatus::Ok ? kExitOk : kExitFailure;
}

int cmd_ws_encode(const std::string& grb, const std::string& outPath, std::ostream& out) {
    Sink s(outPath, out);
    codec::write_csv(s.get(), codec::ws2812_encode(parse_grb(grb)));
    s.close();
    return kExitOk;
}

int cmd_ws_decode(const std::string& in, std::ostream& out) {
    const auto r = codec::ws2812_decode(read_train(in));
    json pixels = json::array();
    for (std::size_t i = 0; i + 24 <= r.bits.size(); i += 24)
        pixels.push_back(hex24(static_cast<std::uint32_t>(codec::payload_value(codec::Bits(
            r.bits.begin() + static_cast<std::ptrdiff_t>(i), r.bits.begin() + static_cast<std::ptrdiff_t>(i + 24))))));
    out << json{{"status", status_name(r.status)}, {"bits", r.bits.size()}, {"pixels", pixels}}.dump() << '\n';
    return r.status == codec::Ws2812Status::Ok ? kExitOk : kExitFailure;
}

int cmd_ws_cascade(const std::string& in, const std::string& outPath, std::ostream& out, std::ostream& err) {
    const auto r = codec::ws2812_cascade(read_train(in));
    if (!outPath.empty()) {
        Sink s(outPath, out);
        codec::write_csv(s.get(), r.forwarded);
        s.close();
    }
    // stdout stays pure CSV when the forwarded waveform goes there
    (outPath.empty() ? err : out) << json{{"status", status_name(r.status)}, {"latched", hex24(r.latched)}}.dump()
                                   << '\n';
    if (outPath.empty()) codec::write_csv(out, r.forwarded);
    return r.status == codec::Ws2812Status::Ok ? kExitOk : kExitFailure;
}

// ---- fsm ----------------------------------------------------------------------

struct Stimulus {
    std::int64_t tick = 0;
    std::optional<std::uint8_t> command;
    std::optional<std::uint64_t> program;
    std::optional<std::array<bool, 2>> sensors;
};

std::vector<Stimulus> load_stimulus(const std::string& path) {
    std::vector<Stimulus> out;
    if (path.empty()) return out;
    std::istringstream in(slurp(path));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            Stimulus s;
            s.tick = j.at("tick").get<std::int64_t>();
            if (j.contains("command")) {
                const auto p = engine::Payload::parse(j.at("command").get<std::string>());
                if (p.kind != engine::Payload::Kind::Command) throw ConfigError("'command' must be an 8-bit command");
                s.command = p.command;
            }
            if (j.contains("program")) s.program = fsm::bits_to_word(j.at("program").get<std::string>());
            if (j.contains("sensors")) s.sensors = j.at("sensors").get<std::array<bool, 2>>();
            out.push_back(s);
        } catch (const json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(n) + ": " + e.what());
        } catch (const Error& e) {
            throw ConfigError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Stimulus& a, const Stimulus& b) { return a.tick < b.tick; });
    return out;
}

const char* level_char(fsm::Level l) {
    switch (l) {
        case fsm::Level::Z: return "Z";
        case fsm::Level::Low: return "0";
        case fsm::Level::High: return "1";
    }
    return "?";
}

int cmd_fsm_exec(const std::string& programBits, const std::string& stimulusPath, std::optional<std::int64_t> ticks,
                 const std::string& outPath, std::ostream& out) {
    fsm::LabletProgram program = fsm::from_bits(programBits);
    const auto stimulus = load_stimulus(stimulusPath);
    const std::int64_t total = ticks.value_or((stimulus.empty() ? 0 : stimulus.back().tick) + 200);
    fsm::FsmState st = fsm::installed(program);
    Sink s(outPath, out);
    auto& o = s.get();
    o << "tick,mode,phase,step,a1,a2,a3,dout,events\n";
    std::size_t cursor = 0;
    for (std::int64_t t = 0; t < total; ++t) {
        std::uint32_t sig = 0;
        for (; cursor < stimulus.size() && stimulus[cursor].tick <= t; ++cursor) {
            const Stimulus& x = stimulus[cursor];
            if (x.sensors) st.sensors = *x.sensors;
            if (x.program) {
                for (int i = fsm::kProgramBits - 1; i >= 0; --i) {
                    const auto r = fsm::load_bit(st, (*x.program >> i) & 1u);
                    st = r.state;
                    sig |= r.signals;
                }
            }
            if (x.command) {
                const auto r = fsm::receive_command(st, *x.command);
                st = r.state;
                sig |= r.signals;
            }
            if (sig & fsm::SigProgramLatched) program = fsm::latched_program(st);
        }
        const auto r = fsm::tick(st, program);
        st = r.state;
        sig |= r.signals;
        std::string names;
        auto add = [&](fsm::Signal bit, const char* name) {
            if (!(sig & bit)) return;
            if (!names.empty()) names += '|';
            names += name;
        };
        add(fsm::SigProtocolViolation, "ProtocolViolation");
        add(fsm::SigProgramLatched, "ProgramLatched");
        add(fsm::SigCommandIgnored, "CommandIgnored");
        add(fsm::SigStarted, "Started");
        add(fsm::SigStopped, "Stopped");
        add(fsm::SigSendStarted, "SendStarted");
        add(fsm::SigSendFinished, "SendFinished");
        add(fsm::SigPhaseChanged, "PhaseChanged");
        add(fsm::SigWentIdle, "WentIdle");
        add(fsm::SigTriggerSet, "TriggerSet");
        add(fsm::SigAutorun, "Autorun");
        o << t << ',' << fsm::to_string(st.mode) << ',' << st.phase << ',' << st.step << ','
          << level_char(st.actuators[0]) << ',' << level_char(st.actuators[1]) << ',' << level_char(st.actuators[2])
          << ',' << (st.dataOut ? 1 : 0) << ',' << names << '\n';
    }
    s.close();
    return kExitOk;
}

// ---- power --------------------------------------------------------------------

int cmd_power_dome(const std::string& mode, bool stats, const std::string& outPath, std::ostream& out) {
    const auto grid = photonics::dome_sweep(mode == "prefolded" ? photonics::DomeMode::Prefolded
                                                                 : photonics::DomeMode::Folded);
    Sink s(outPath, out);
    auto& o = s.get();
    o << std::setprecision(10) << "azimuth_deg,altitude_deg,relative_pce,power_w,v_out\n";
    for (const auto& c : grid)
        o << c.azimuthDeg << ',' << c.altitudeDeg << ',' << c.relative << ',' << c.out.power << ',' << c.out.vOut
          << '\n';
    s.close();
    if (stats) {
        const auto g = photonics::grid_stats(grid);
        json j = {{"mean", g.mean}, {"cv", g.cv}, {"min", g.min}, {"max", g.max}, {"min_nonzero", g.minNonZero}};
        j["max_over_min"] = g.min > 0 ? json(g.max / g.min) : json("inf");
        j["max_over_min_nonzero"] = g.max / g.minNonZero;
        (outPath.empty() ? std::cerr : out) << j.dump() << '\n';
    }
    return kExitOk;
}

int cmd_power_sweep(const std::string& kind, double stepDeg, const std::string& outPath, std::ostream& out) {
    if (!(stepDeg > 0)) throw ConfigError("--step must be positive");
    photonics::SolarCellSpec cell;
    Sink s(outPath, out);
    auto& o = s.get();
    o << std::setprecision(12);
    if (kind == "planar") {
        // Tilt from the surface normal toward +x.
        cell.kind = photonics::CellKind::Planar;
        o << "angle_deg,factor\n";
        for (double a = -90; a <= 90 + 1e-9; a += stepDeg) {
            const double r = a * M_PI / 180;
            o << a << ',' << photonics::angular_factor(cell, {std::sin(r), 0, std::cos(r)}) << '\n';
        }
    } else {
        // Rotation of the incident direction about the tube axis (+x).
        cell.kind = photonics::CellKind::Tubular;
        o << "angle_deg,factor\n";
        for (double a = 0; a < 360 - 1e-9; a += stepDeg) {
            const double r = a * M_PI / 180;
            o << a << ',' << photonics::angular_factor(cell, {0, std::sin(r), std::cos(r)}) << '\n';
        }
    }
    s.close();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"smartlet: micro-robot swarm simulator and protocol toolkit"};
    app.require_subcommand(1);

    RunArgs ra;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Run a scenario headlessly and write a JSONL trace");
    run->add_option("--scenario", ra.scenario, "Scenario JSON")->required();
    auto* runSeed = run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--trace", ra.trace, "Trace output (JSONL)");
    run->add_option("--csv", ra.csv, "Per-agent state CSV at the trace decimation");
    run->add_option("--script", ra.script, "JSONL of {tick, msg} commands to apply");
    run->add_option("--threads", ra.threads, "Worker threads")->check(CLI::Range(1, 64));

    int port = 8765;
    std::string address = "127.0.0.1";
    auto* serve = app.add_subcommand("serve", "Serve a paused scenario over WebSocket");
    serve->add_option("--scenario", ra.scenario, "Scenario JSON")->required();
    serve->add_option("--port", port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve->add_option("--address", address, "Bind address");
    auto* serveSeed = serve->add_option("--seed", seed, "Override the scenario seed");
    serve->add_option("--trace", ra.trace, "Session trace output (JSONL)");
    serve->add_option("--threads", ra.threads, "Worker threads")->check(CLI::Range(1, 64));

    std::string tracePath, replayOut;
    bool verify = false;
    auto* replay = app.add_subcommand("replay", "Re-run a recorded trace headlessly");
    replay->add_option("--trace", tracePath, "Recorded trace")->required();
    replay->add_flag("--verify", verify, "Fail unless the replay is byte-identical");
    replay->add_option("--out", replayOut, "Write the replayed trace here");
    replay->add_option("--threads", ra.threads, "Worker threads")->check(CLI::Range(1, 64));

    auto* codecCmd = app.add_subcommand("codec", "Waveform codecs");
    codecCmd->require_subcommand(1);
    auto* man = codecCmd->add_subcommand("manchester", "Manchester codec");
    man->require_subcommand(1);
    codec::ManchesterParams mp;
    std::string bits, command, program, in, outPath;
    bool raw = false, framed = false;
    auto* manEnc = man->add_subcommand("encode", "Encode bits, a command or a program to CSV");
    auto* bitsOpt = manEnc->add_option("--bits", bits, "Raw bit string");
    auto* cmdOpt = manEnc->add_option("--command", command, "START | STOP | SEND | 0xNN | 8 bits");
    auto* progOpt = manEnc->add_option("--program", program, "58-bit program");
    bitsOpt->excludes(cmdOpt)->excludes(progOpt);
    cmdOpt->excludes(progOpt);
    manEnc->add_flag("--no-frame-preamble", raw, "Encode the frame bits without the preamble framing");
    manEnc->add_option("--rate", mp.bitRate, "Bit rate (Hz)");
    manEnc->add_option("--preamble", mp.preambleBits, "Preamble bits");
    manEnc->add_option("--out", outPath, "CSV output");
    auto* manDec = man->add_subcommand("decode", "Decode a CSV waveform");
    manDec->add_option("--in", in, "CSV input ('-' for stdin)")->required();
    manDec->add_option("--rate", mp.bitRate, "Expected bit rate (Hz)");
    manDec->add_option("--tolerance", mp.toleranceFraction, "Timing tolerance fraction");
    manDec->add_option("--preamble", mp.preambleBits, "Preamble bits");
    manDec->add_flag("--framed", framed, "Interpret the bits as a command/program frame");

    auto* ws = codecCmd->add_subcommand("ws2812b", "WS2812B NZR codec");
    ws->require_subcommand(1);
    std::string grb;
    auto* wsEnc = ws->add_subcommand("encode", "Encode GRB pixels to CSV");
    wsEnc->add_option("--grb", grb, "Comma-separated GGRRBB hex pixels")->required();
    wsEnc->add_option("--out", outPath, "CSV output");
    auto* wsDec = ws->add_subcommand("decode", "Decode a CSV waveform");
    wsDec->add_option("--in", in, "CSV input")->required();
    auto* wsCas = ws->add_subcommand("cascade", "Latch the first pixel and forward the rest");
    wsCas->add_option("--in", in, "CSV input")->required();
    wsCas->add_option("--out", outPath, "Forwarded waveform CSV");

    auto* fsmCmd = app.add_subcommand("fsm", "Lablet state machine");
    fsmCmd->require_subcommand(1);
    std::string stimulus;
    std::int64_t ticks = -1;
    auto* exec = fsmCmd->add_subcommand("exec", "Run a program against a stimulus script");
    exec->add_option("--program", program, "58-bit program")->required();
    exec->add_option("--stimulus", stimulus, "JSONL stimulus: {tick, command|program|sensors}");
    exec->add_option("--ticks", ticks, "Ticks to run (default: last stimulus + 200)");
    exec->add_option("--out", outPath, "CSV output");

    auto* power = app.add_subcommand("power", "Solar harvesting");
    power->require_subcommand(1);
    std::string mode = "folded", kind = "tubular";
    bool stats = false;
    double step = 1.0;
    auto* dome = power->add_subcommand("dome", "Light-dome sweep (16 azimuths x 21 altitudes)");
    dome->add_option("--mode", mode, "folded | prefolded")->check(CLI::IsMember({"folded", "prefolded"}));
    dome->add_option("--out", outPath, "CSV output");
    dome->add_flag("--stats", stats, "Also print grid statistics as JSON");
    auto* sweep = power->add_subcommand("sweep-angle", "Single-cell angular factor");
    sweep->add_option("--kind", kind, "planar | tubular")->check(CLI::IsMember({"planar", "tubular"}));
    sweep->add_option("--step", step, "Angle step (deg)");
    sweep->add_option("--out", outPath, "CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (*run) {
            if (*runSeed) ra.seed = seed;
            return cmd_run(ra, out, err);
        }
        if (*serve) {
            if (*serveSeed) ra.seed = seed;
            return cmd_serve(ra, port, address, out, err);
        }
        if (*replay) return cmd_replay(tracePath, verify, replayOut, ra.threads, out, err);
        if (*manEnc) {
            if (bits.empty() && command.empty() && program.empty())
                throw ConfigError("give one of --bits, --command or --program");
            return cmd_manchester_encode(bits, command, program, mp, raw, outPath, out);
        }
        if (*manDec) return cmd_manchester_decode(in, mp, framed, out);
        if (*wsEnc) return cmd_ws_encode(grb, outPath, out);
        if (*wsDec) return cmd_ws_decode(in, out);
        if (*wsCas) return cmd_ws_cascade(in, outPath, out, err);
        if (*exec)
            return cmd_fsm_exec(program, stimulus, ticks >= 0 ? std::optional<std::int64_t>(ticks) : std::nullopt,
                                outPath, out);
        if (*dome) return cmd_power_dome(mode, stats, outPath, out);
        if (*sweep) return cmd_power_sweep(kind, step, outPath, out);
    } catch (const TraceIoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitTraceIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
    return kExitFailure;
}

}  // namespace smartlet::tools
