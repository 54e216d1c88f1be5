#include "smartlet/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace smartlet::engine {

using nlohmann::json;

ScenarioError::ScenarioError(const std::string& origin, int line_, const std::string& what)
    : ConfigError(origin + (line_ > 0 ? ":" + std::to_string(line_) : std::string()) + ": " + what), line(line_) {}

Payload Payload::parse(std::string_view text) {
    Payload p;
    if (text == "START") {
        p.command = fsm::command::Start;
    } else if (text == "STOP") {
        p.command = fsm::command::Stop;
    } else if (text == "SEND") {
        p.command = fsm::command::Send;
    } else if (text.size() == 4 && (text.substr(0, 2) == "0x" || text.substr(0, 2) == "0X") &&
               std::isxdigit(static_cast<unsigned char>(text[2])) && std::isxdigit(static_cast<unsigned char>(text[3]))) {
        p.command = static_cast<std::uint8_t>(std::stoul(std::string(text.substr(2)), nullptr, 16));
    } else if (text.size() == 8 && text.find_first_not_of("01") == std::string_view::npos) {
        p.command = static_cast<std::uint8_t>(std::stoul(std::string(text), nullptr, 2));
    } else if (text.size() == fsm::kProgramBits) {
        p.kind = Kind::Program;
        p.program = fsm::bits_to_word(text);
    } else {
        throw ConfigError("payload must be START, STOP, SEND, 0xNN, 8 bits or 58 bits: '" + std::string(text) + "'");
    }
    return p;
}

std::string Payload::text() const {
    if (kind == Kind::Program) return fsm::word_to_bits(program);
    if (const char* n = fsm::command_name(command)) return n;
    static const char* hex = "0123456789ABCDEF";
    return std::string("0x") + hex[command >> 4] + hex[command & 0xF];
}

std::int64_t Scenario::total_ticks() const { return std::llround(duration / physicsDt); }

Face parse_face(std::string_view name) {
    for (int i = 0; i < kFaceCount; ++i)
        if (name == kFaceNames[i]) return static_cast<Face>(i);
    throw ConfigError("unknown face '" + std::string(name) + "' (expected +x, -x, +y, -y, +z or -z)");
}

namespace {

// Field problem, located later by JSON pointer.
struct FieldError {
    std::string pointer;
    std::string what;
};

class Reader {
public:
    Reader(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {}

    void allow(std::initializer_list<const char*> keys) const {
        if (!j_.is_object()) fail("expected an object");
        for (const auto& [k, v] : j_.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
                throw FieldError{ptr_ + "/" + k, "unknown key '" + k + "'"};
        }
    }
    bool has(const char* k) const { return j_.contains(k); }
    Reader child(const char* k) const { return {j_.at(k), ptr_ + "/" + k}; }
    const json& raw() const { return j_; }
    const std::string& ptr() const { return ptr_; }

    double num(const char* k, double def) const {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_number()) throw FieldError{ptr_ + "/" + k, "expected a number"};
        return v.get<double>();
    }
    double positive(const char* k, double def) const {
        const double v = num(k, def);
        if (!(v > 0) || !std::isfinite(v)) throw FieldError{ptr_ + "/" + k, "must be positive"};
        return v;
    }
    bool flag(const char* k, bool def) const {
        if (!has(k)) return def;
        if (!j_.at(k).is_boolean()) throw FieldError{ptr_ + "/" + k, "expected true or false"};
        return j_.at(k).get<bool>();
    }
    std::string str(const char* k, const std::string& def) const {
        if (!has(k)) return def;
        if (!j_.at(k).is_string()) throw FieldError{ptr_ + "/" + k, "expected a string"};
        return j_.at(k).get<std::string>();
    }
    Vec3 vec(const char* k, Vec3 def, double scale) const {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); }))
            throw FieldError{ptr_ + "/" + k, "expected [x, y, z]"};
        return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()} * scale;
    }
    [[noreturn]] void fail(const std::string& what) const { throw FieldError{ptr_, what}; }

private:
    const json& j_;
    std::string ptr_;
};

template <class F>
auto wrap(const std::string& pointer, F&& f) {
    try {
        return f();
    } catch (const FieldError&) {
        throw;
    } catch (const std::exception& e) {
        throw FieldError{pointer, e.what()};
    }
}

aquatics::FacePattern read_face(const Reader& r) {
    r.allow({"rows", "registration"});
    if (!r.has("rows") || !r.raw().at("rows").is_array()) r.fail("face needs a 'rows' array");
    std::vector<std::string> rows;
    for (const auto& e : r.raw().at("rows")) {
        if (!e.is_string()) r.fail("face rows must be strings");
        rows.push_back(e.get<std::string>());
    }
    return wrap(r.ptr(), [&] { return aquatics::FacePattern::parse(rows, r.flag("registration", false)); });
}

AgentConfig read_agent(const Reader& r, const aquatics::Tank& tank) {
    r.allow({"id", "name", "position_mm", "body", "initial_gas_nl", "program", "decoder_rate_hz", "decoder_tolerance",
             "clock_hz", "tethered", "faces", "green_led_face", "opd_faces", "link", "resting_draw_w",
             "faraday_efficiency"});
    AgentConfig a;
    if (!r.has("id") || !r.raw().at("id").is_number_integer()) r.fail("agent needs an integer 'id'");
    a.id = r.raw().at("id").get<int>();
    if (a.id < 0) throw FieldError{r.ptr() + "/id", "agent ids must be non-negative"};
    a.name = r.str("name", "S" + std::to_string(a.id));

    if (r.has("body")) {
        const Reader b = r.child("body");
        b.allow({"edge_mm", "dry_mass_kg", "solid_volume_m3"});
        a.body.edge = b.positive("edge_mm", a.body.edge * 1e3) * 1e-3;
        a.body.dryMass = b.positive("dry_mass_kg", a.body.dryMass);
        a.body.solidVolume = b.positive("solid_volume_m3", a.body.solidVolume);
    }
    a.position = r.vec("position_mm", {tank.sizeX / 2, tank.sizeY / 2, 0}, 1e-3);
    const double half = a.body.edge / 2;
    a.position.z = std::clamp(a.position.z, aquatics::floor_z(a.body), aquatics::surface_z(a.body, tank));
    if (a.position.x < half || a.position.x > tank.sizeX - half || a.position.y < half ||
        a.position.y > tank.sizeY - half)
        throw FieldError{r.ptr() + "/position_mm", "agent lies outside the tank"};

    a.initialGas = r.num("initial_gas_nl", 0) * 1e-12;
    if (a.initialGas < 0) throw FieldError{r.ptr() + "/initial_gas_nl", "must be non-negative"};
    if (r.has("program")) {
        const std::string bits = r.str("program", "");
        a.program = wrap(r.ptr() + "/program", [&] { return fsm::from_bits(bits); });
    }
    a.decoderRate = r.positive("decoder_rate_hz", a.decoderRate);
    a.decoderTolerance = r.positive("decoder_tolerance", a.decoderTolerance);
    if (a.decoderTolerance >= 0.5) throw FieldError{r.ptr() + "/decoder_tolerance", "must be below 0.5"};
    if (r.has("clock_hz")) {
        const Reader c = r.child("clock_hz");
        c.allow({"slow", "fast"});
        a.slowClockHz = c.positive("slow", a.slowClockHz);
        a.fastClockHz = c.positive("fast", a.fastClockHz);
    }
    a.tethered = r.flag("tethered", false);
    if (r.has("faces")) {
        const Reader f = r.child("faces");
        f.allow({"+x", "-x", "+y", "-y", "+z", "-z"});
        for (const auto& [k, v] : f.raw().items())
            a.faces[static_cast<int>(parse_face(k))] = read_face(Reader(v, f.ptr() + "/" + k));
    }
    a.greenLedFace = wrap(r.ptr() + "/green_led_face", [&] { return parse_face(r.str("green_led_face", "-x")); });
    if (r.has("opd_faces")) {
        const json& o = r.raw().at("opd_faces");
        if (!o.is_array() || o.size() != 2) throw FieldError{r.ptr() + "/opd_faces", "expected two face names"};
        for (int i = 0; i < 2; ++i)
            a.opdFaces[i] = wrap(r.ptr() + "/opd_faces", [&] { return parse_face(o[i].get<std::string>()); });
    }
    if (r.has("link")) {
        const Reader l = r.child("link");
        l.allow({"m", "i0_w_sr", "e_half_w_cm2", "threshold_v", "v_sat", "bandwidth_hz"});
        a.link.m = l.positive("m", a.link.m);
        a.link.i0 = l.positive("i0_w_sr", a.link.i0);
        a.link.eHalf = l.positive("e_half_w_cm2", a.link.eHalf);
        a.link.threshold = l.positive("threshold_v", a.link.threshold);
        a.link.vSat = l.positive("v_sat", a.link.vSat);
        a.link.bandwidthHz = l.positive("bandwidth_hz", a.link.bandwidthHz);
    }
    a.restingDraw = r.num("resting_draw_w", a.restingDraw);
    a.faradayEfficiency = r.num("faraday_efficiency", a.faradayEfficiency);
    if (a.faradayEfficiency < 0 || a.faradayEfficiency > 1)
        throw FieldError{r.ptr() + "/faraday_efficiency", "must lie in [0, 1]"};
    return a;
}

LightEvent read_light(const Reader& r, const std::set<int>& ids) {
    r.allow({"t_s", "source", "agent", "rate_hz", "payload", "duration_s"});
    LightEvent e;
    e.t = r.num("t_s", 0);
    if (e.t < 0) throw FieldError{r.ptr() + "/t_s", "must be non-negative"};
    const std::string src = r.str("source", "global");
    if (src == "global") {
        e.source = LightEvent::Source::Global;
    } else if (src == "agent") {
        e.source = LightEvent::Source::Agent;
        if (!r.has("agent") || !r.raw().at("agent").is_number_integer()) r.fail("agent light needs an 'agent' id");
        e.agent = r.raw().at("agent").get<int>();
        if (!ids.count(e.agent)) throw FieldError{r.ptr() + "/agent", "no agent with id " + std::to_string(e.agent)};
    } else {
        throw FieldError{r.ptr() + "/source", "source must be 'global' or 'agent'"};
    }
    e.rateHz = r.num("rate_hz", e.rateHz);
    if (e.rateHz < 1 || e.rateHz > 1000) throw FieldError{r.ptr() + "/rate_hz", "rate must lie in [1, 1000] Hz"};
    e.payload = wrap(r.ptr() + "/payload", [&] { return Payload::parse(r.str("payload", "")); });
    e.duration = r.num("duration_s", 0);
    if (e.duration < 0) throw FieldError{r.ptr() + "/duration_s", "must be non-negative"};
    return e;
}

Scenario build(const json& j) {
    const Reader r(j, "");
    r.allow({"name", "seed", "duration_s", "physics_dt_s", "comm_dt_s", "decimation", "tank", "water", "sun",
             "global_light", "agents", "schedule"});
    Scenario s;
    s.name = r.str("name", s.name);
    if (r.has("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw FieldError{"/seed", "seed must be a non-negative integer"};
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    s.duration = r.positive("duration_s", s.duration);
    s.physicsDt = r.positive("physics_dt_s", s.physicsDt);
    s.commDt = r.positive("comm_dt_s", s.commDt);
    const double ratio = s.physicsDt / s.commDt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1)
        throw FieldError{"/comm_dt_s", "comm_dt_s must divide physics_dt_s"};
    if (r.has("decimation")) {
        if (!j.at("decimation").is_number_integer() || j.at("decimation").get<int>() < 1)
            throw FieldError{"/decimation", "decimation must be a positive integer"};
        s.decimation = j.at("decimation").get<int>();
    }
    if (r.has("tank")) {
        const Reader t = r.child("tank");
        t.allow({"size_mm", "water_depth_mm"});
        if (t.has("size_mm")) {
            const json& v = j.at("tank").at("size_mm");
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                throw FieldError{"/tank/size_mm", "expected [x, y]"};
            s.tank.sizeX = v[0].get<double>() * 1e-3;
            s.tank.sizeY = v[1].get<double>() * 1e-3;
        }
        s.tank.waterDepth = t.positive("water_depth_mm", s.tank.waterDepth * 1e3) * 1e-3;
    }
    if (r.has("water")) {
        const Reader w = r.child("water");
        w.allow({"density", "k_bulk", "k_surface", "drag", "capillary_length_mm", "capillary_f0",
                 "capillary_cutoff_mm", "bond_force_per_unit", "max_speed_mm_s", "brownian_sigma_mm",
                 "capture_fraction", "min_dock_score"});
        auto& wp = s.water;
        wp.density = w.positive("density", wp.density);
        wp.kBulk = w.positive("k_bulk", wp.kBulk);
        wp.kSurface = w.positive("k_surface", wp.kSurface);
        wp.drag = w.positive("drag", wp.drag);
        wp.capillaryLength = w.positive("capillary_length_mm", wp.capillaryLength * 1e3) * 1e-3;
        wp.capillaryF0 = w.positive("capillary_f0", wp.capillaryF0);
        wp.capillaryCutoff = w.positive("capillary_cutoff_mm", wp.capillaryCutoff * 1e3) * 1e-3;
        wp.bondForcePerUnit = w.positive("bond_force_per_unit", wp.bondForcePerUnit);
        wp.maxSpeed = w.positive("max_speed_mm_s", wp.maxSpeed * 1e3) * 1e-3;
        wp.brownianSigma = w.num("brownian_sigma_mm", wp.brownianSigma * 1e3) * 1e-3;
        wp.captureFraction = w.positive("capture_fraction", wp.captureFraction);
        wp.minDockScore = static_cast<int>(w.num("min_dock_score", wp.minDockScore));
        wrap("/water", [&] { wp.check(); return 0; });
    }
    if (r.has("sun")) {
        const json& arr = j.at("sun");
        if (!arr.is_array()) throw FieldError{"/sun", "expected an array of sources"};
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const Reader sr(arr[i], "/sun/" + std::to_string(i));
            sr.allow({"irradiance_w_cm2", "direction"});
            photonics::LightSource src;
            src.irradiance = sr.num("irradiance_w_cm2", photonics::kOneSun);
            if (src.irradiance < 0) throw FieldError{sr.ptr() + "/irradiance_w_cm2", "must be non-negative"};
            src.direction = normalized(sr.vec("direction", {0, 0, 1}, 1.0));
            s.suns.push_back(src);
        }
    } else {
        s.suns.push_back({});
    }
    if (r.has("global_light")) {
        const Reader g = r.child("global_light");
        g.allow({"irradiance_w_cm2"});
        s.globalLightIrradiance = g.positive("irradiance_w_cm2", s.globalLightIrradiance);
    }
    std::set<int> ids;
    if (r.has("agents")) {
        const json& arr = j.at("agents");
        if (!arr.is_array()) throw FieldError{"/agents", "expected an array"};
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string ptr = "/agents/" + std::to_string(i);
            AgentConfig a = read_agent(Reader(arr[i], ptr), s.tank);
            if (!ids.insert(a.id).second) throw FieldError{ptr + "/id", "duplicate agent id " + std::to_string(a.id)};
            s.agents.push_back(std::move(a));
        }
        std::sort(s.agents.begin(), s.agents.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    }
    if (r.has("schedule")) {
        const json& arr = j.at("schedule");
        if (!arr.is_array()) throw FieldError{"/schedule", "expected an array"};
        for (std::size_t i = 0; i < arr.size(); ++i)
            s.schedule.push_back(read_light(Reader(arr[i], "/schedule/" + std::to_string(i)), ids));
        std::stable_sort(s.schedule.begin(), s.schedule.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    }
    s.source = j;
    return s;
}

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Walks already-validated JSON text to the member or element named by a
// pointer; reports the line of the deepest component it reached.
class Locator {
public:
    explicit Locator(std::string_view t) : t_(t) {}

    std::size_t find(const std::vector<std::string>& path) {
        std::size_t found = 0;
        ws();
        for (const auto& tok : path) {
            if (i_ >= t_.size()) break;
            if (t_[i_] == '{') {
                if (!member(tok)) break;
                found = keyAt_;
            } else if (t_[i_] == '[') {
                if (!std::all_of(tok.begin(), tok.end(), ::isdigit) || !element(std::stoul(tok))) break;
                found = i_;
            } else {
                break;
            }
        }
        return found;
    }

private:
    void ws() {
        while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
    }
    std::string str() {  // at '"'; escapes are kept verbatim
        const std::size_t start = ++i_;
        while (i_ < t_.size() && t_[i_] != '"') i_ += t_[i_] == '\\' ? 2 : 1;
        return std::string(t_.substr(start, i_++ - start));
    }
    void skip() {
        ws();
        if (i_ >= t_.size()) return;
        const char c = t_[i_];
        if (c == '"') {
            str();
        } else if (c == '{' || c == '[') {
            int depth = 0;
            do {
                if (t_[i_] == '"') {
                    str();
                    continue;
                }
                if (t_[i_] == '{' || t_[i_] == '[') ++depth;
                if (t_[i_] == '}' || t_[i_] == ']') --depth;
                ++i_;
            } while (depth > 0 && i_ < t_.size());
        } else {
            while (i_ < t_.size() && !std::strchr(",]} \t\r\n", t_[i_])) ++i_;
        }
    }
    // At '{': leaves i_ on the value of `key`, keyAt_ on the key.
    bool member(const std::string& key) {
        ++i_;
        for (;;) {
            ws();
            if (i_ >= t_.size() || t_[i_] != '"') return false;
            const std::size_t at = i_;
            const std::string k = str();
            ws();
            ++i_;  // ':'
            ws();
            if (k == key) {
                keyAt_ = at;
                return true;
            }
            skip();
            ws();
            if (i_ >= t_.size() || t_[i_] != ',') return false;
            ++i_;
        }
    }
    bool element(std::size_t n) {
        ++i_;
        for (std::size_t k = 0;; ++k) {
            ws();
            if (i_ >= t_.size() || t_[i_] == ']') return false;
            if (k == n) return true;
            skip();
            ws();
            if (i_ >= t_.size() || t_[i_] != ',') return false;
            ++i_;
        }
    }

    std::string_view t_;
    std::size_t i_ = 0;
    std::size_t keyAt_ = 0;
};

int line_of_pointer(std::string_view text, const std::string& pointer) {
    if (text.empty()) return 0;
    std::vector<std::string> path;
    std::stringstream ss(pointer);
    std::string tok;
    while (std::getline(ss, tok, '/'))
        if (!tok.empty()) path.push_back(tok);
    return line_of_offset(text, Locator(text).find(path));
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::string& origin) {
    try {
        return build(j);
    } catch (const FieldError& e) {
        throw ScenarioError(origin, 0, (e.pointer.empty() ? std::string("/") : e.pointer) + ": " + e.what);
    }
}

Scenario parse_scenario(std::string_view text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ScenarioError(origin, line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
    }
    try {
        return build(j);
    } catch (const FieldError& e) {
        throw ScenarioError(origin, line_of_pointer(text, e.pointer),
                            (e.pointer.empty() ? std::string("/") : e.pointer) + ": " + e.what);
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path, 0, "cannot open scenario file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

}  // namespace smartlet::engine
