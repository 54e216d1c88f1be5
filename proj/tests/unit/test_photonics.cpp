#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "smartlet/error.hpp"
#include "smartlet/optical_link.hpp"
#include "smartlet/photonics.hpp"
#include "support.hpp"

using namespace smartlet;
using namespace smartlet::photonics;

TEST_SUITE("photonics") {

TEST_CASE("pce matches FF*Isc*Voc/(Pin*A) over 10^4 random inputs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double ff = u(rng), isc = u(rng) * 1e-3, voc = u(rng), pin = u(rng) * 0.2, area = u(rng);
        const double closed = ff * isc * voc / (pin * area) * 100.0;
        const double got = pce(ff * isc * voc, pin, area);
        REQUIRE(std::abs(got - closed) / closed < 1e-12);
    }
    CHECK_THROWS_AS(pce(1, 0, 1), DomainError);
    CHECK_THROWS_AS(pce(1, 1, -1), DomainError);
}

TEST_CASE("calibration points hold exactly") {
    const SolarCellSpec cell;
    CHECK(pce(cell.fillFactor * cell.iSc * cell.vOc, kOneSun, cell.footprintArea) == doctest::Approx(11.5).epsilon(1e-14));

    const SeriesString s = folded_cube_string();
    const StringOutput top = string_power(s, {{{SourceKind::Sun, {0, 0, 1}, kOneSun}}});
    CHECK(top.iOut == doctest::Approx(7e-6).epsilon(1e-12));
    CHECK(top.vOut == doctest::Approx(2.1).epsilon(1e-12));
    CHECK(top.power == doctest::Approx(17e-6).epsilon(1e-12));
    CHECK(pce(top.power, kOneSun, kStringArea) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("calibration rejects a dark environment") {
    SeriesString s = prefolded_string();
    CHECK_THROWS_AS(calibrate(s, {{{SourceKind::Sun, {0, 0, -1}, kOneSun}}}, 1, 1, 1), ConfigError);
}

TEST_CASE("folded dome sweep is omnidirectional, prefolded is not") {
    const auto folded = dome_sweep(DomeMode::Folded);
    const auto flat = dome_sweep(DomeMode::Prefolded);
    REQUIRE(folded.size() == 336);
    REQUIRE(flat.size() == 336);
    const GridStats fs = grid_stats(folded), ps = grid_stats(flat);
    CHECK(fs.cv < 0.20);
    CHECK(fs.minNonZero > 0);
    CHECK(ps.max / ps.minNonZero > 3);
    CHECK(ps.cv > fs.cv);
}

TEST_CASE("tubular angular factor is invariant under rotation about the tube axis") {
    SolarCellSpec c;
    c.kind = CellKind::Tubular;
    c.tubeAxis = {1, 0, 0};
    for (int k = 0; k <= 18; ++k) {
        const double phi = k * std::numbers::pi / 18;
        const double ref = angular_factor(c, {std::cos(phi), std::sin(phi), 0});
        for (int j = 0; j < 64; ++j) {
            const double th = j * 2 * std::numbers::pi / 64;
            const Vec3 d{std::cos(phi), std::sin(phi) * std::sin(th), std::sin(phi) * std::cos(th)};
            REQUIRE(angular_factor(c, d) == ref);
        }
    }
    CHECK(angular_factor(c, {1, 0, 0}) == c.endCapFloor);
    CHECK(angular_factor(c, {0, 0, 1}) == 1.0);
}

TEST_CASE("planar factor is the clipped cosine") {
    SolarCellSpec c;
    c.kind = CellKind::Planar;
    CHECK(angular_factor(c, {0, 0, 1}) == 1.0);
    CHECK(angular_factor(c, {0, 0, -1}) == 0.0);
    CHECK(angular_factor(c, normalized(Vec3{1, 0, 1})) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("folded string voltage stays in [2.1, 3.1] V and never reaches the planar 5.2 V") {
    const double planar = string_power(prefolded_string(), {{{SourceKind::Sun, {0, 0, 1}, kOneSun}}}).vOut;
    CHECK(planar == doctest::Approx(5.2));
    for (const auto& c : dome_sweep(DomeMode::Folded)) {
        INFO("az " << c.azimuthDeg << " alt " << c.altitudeDeg);
        CHECK(c.out.vOut >= 2.1 - 1e-9);
        CHECK(c.out.vOut <= 3.1);
        CHECK(std::abs(c.out.vOut - planar) > 1.0);
    }
}

TEST_CASE("dome mask disables LEDs and is validated") {
    std::vector<bool> mask(336, false);
    mask[5] = true;
    const auto g = dome_sweep(folded_cube_string(), mask);
    CHECK(g[5].relative == 1.0);
    CHECK(g[6].out.power == 0.0);
    CHECK_THROWS_AS(dome_sweep(folded_cube_string(), std::vector<bool>(3, true)), ConfigError);
}

}  // TEST_SUITE

TEST_SUITE("link") {

TEST_CASE("aligned link voltages match the closed-form oracle") {
    const auto ref = fixtures::json("physics_reference.json");
    const OpticalLinkParams link;
    for (const auto& [mm, v] : ref.at("link_v_aligned").items()) {
        const double d = std::stod(mm) * 1e-3;
        const OpdReading r = opd_receive(link, {{0, 0, 0}, {1, 0, 0}, true}, {{d, 0, 0}, {-1, 0, 0}});
        CHECK(r.voltage == doctest::Approx(v.get<double>()).epsilon(1e-12));
    }
    const double a = std::numbers::pi / 6;
    const OpdReading tilted = opd_receive(link, {{0, 0, 0}, {std::cos(a), std::sin(a), 0}, true},
                                          {{4e-3, 0, 0}, {-std::cos(a), -std::sin(a), 0}});
    CHECK(tilted.voltage == doctest::Approx(ref.at("link_v_30deg_4mm").get<double>()).epsilon(1e-12));
}

TEST_CASE("link is dark when off or facing away") {
    const OpticalLinkParams link;
    CHECK(link_irradiance(link, {{0, 0, 0}, {1, 0, 0}, false}, {{1e-3, 0, 0}, {-1, 0, 0}}) == 0.0);
    CHECK(link_irradiance(link, {{0, 0, 0}, {-1, 0, 0}, true}, {{1e-3, 0, 0}, {-1, 0, 0}}) == 0.0);
    CHECK(opd_voltage(link, 0) == 0.0);
}

TEST_CASE("filter settles to its input and respects the threshold") {
    OpdFilter f;
    for (int i = 0; i < 100; ++i) f.step(1.0, 1e-4);
    CHECK(f.voltage() == doctest::Approx(1.0));
    CHECK(f.digital());
    for (int i = 0; i < 100; ++i) f.step(0.5, 1e-4);
    CHECK_FALSE(f.digital());
}

TEST_CASE("digital link closes at <= 4 mm and fails at >= 6 mm for 1-1000 Hz") {
    for (double rate : {1.0, 10.0, 50.0, 200.0, 500.0, 1000.0}) {
        for (double d : {0.5, 2.0, 4.0}) {
            INFO("rate " << rate << " d " << d);
            CHECK(support::link_delivers(rate, d));
        }
        for (double d : {6.0, 8.0}) {
            INFO("rate " << rate << " d " << d);
            CHECK_FALSE(support::link_delivers(rate, d));
        }
    }
}

}  // TEST_SUITE
