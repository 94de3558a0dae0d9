#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "greencell/scenario.hpp"
#include "support.hpp"

#include <cmath>
#include <functional>
#include <string>

using namespace greencell;

namespace {

const char* kMinimal = R"({"sites": [{"position": [0, 0]}]})";

std::string with_green(const std::string& attached)
{
    return R"({"sites": [{"id": "A", "position": [0, 0], "sectors": [{"id": "s1", "azimuth_deg": 0}]}],
               "greens": [{"position": [100, 0], "attached_sectors": )" +
           attached + "}]}";
}

Scenario valid_world()
{
    Scenario s;
    s.clutter.bounds = {-500.0, -500.0, 500.0, 500.0};
    s.sites.push_back({"A", {0.0, 0.0}, {{"s1", 0.0}, {"s2", 120.0}}});
    s.clutter.buildings.push_back({"b0", {100.0, 100.0, 200.0, 150.0}, 20.0});
    return s;
}

template <class F>
std::vector<Violation> violations_after(F&& mutate)
{
    Scenario s = valid_world();
    mutate(s);
    return validate_scenario(s);
}

} // namespace

TEST_CASE("geometry uses compass bearings")
{
    CHECK(bearing_deg({0, 0}, {0, 10}) == doctest::Approx(0.0));
    CHECK(bearing_deg({0, 0}, {10, 0}) == doctest::Approx(90.0));
    CHECK(bearing_deg({0, 0}, {0, -10}) == doctest::Approx(180.0));
    CHECK(bearing_deg({0, 0}, {-10, 0}) == doctest::Approx(270.0));
    CHECK(wrap_deg(350.0) == doctest::Approx(-10.0));
    CHECK(wrap_deg(-180.0) == doctest::Approx(180.0));
    CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
}

TEST_CASE("minimal document loads with defaults")
{
    const Scenario s = load_scenario(kMinimal);
    REQUIRE(s.sites.size() == 1);
    CHECK(s.sites[0].id == "site0");
    REQUIRE(s.sector_count() == 1);
    CHECK(s.greens.empty());
    CHECK(s.radio.p_min_dbm == -50.0);
    CHECK(s.radio.p_max_dbm == 24.0);
    CHECK(s.radio.thermal_noise_dbm == -104.0);
    CHECK(s.radio.pathloss[2].pl0_db == 128.1);
    CHECK(s.radio.pathloss[2].exponent == 3.76);
    CHECK(s.radio.combining == Combining::mrc);
    CHECK(s.radio.dl_shadowing_mode == DlShadowingMode::independent);
    CHECK(s.traffic.mobiles_per_sector == 10);
    CHECK(s.traffic.voice_sinr_target_db == 2.0);
    CHECK(s.traffic.data_sinr_target_db == 8.0);
}

TEST_CASE("default power limits span 74 dB and are accepted")
{
    const Scenario s = load_scenario(kMinimal);
    CHECK(s.radio.p_max_dbm - s.radio.p_min_dbm == doctest::Approx(74.0));
    CHECK(validate_scenario(s).empty());
}

TEST_CASE("dangling green attachment names the missing sector")
{
    try {
        load_scenario(with_green(R"(["s9"])"));
        FAIL("expected a validation error");
    } catch (const ScenarioError& e) {
        CHECK(e.kind() == ScenarioError::Kind::validation);
        CHECK(std::string(e.what()).find("s9") != std::string::npos);
        CHECK(e.path() == "/greens/0/attached_sectors/0");
    }
    CHECK_NOTHROW(load_scenario(with_green(R"(["s1"])")));
}

TEST_CASE("unknown keys and malformed documents are rejected")
{
    try {
        load_scenario(R"({"sites": [{"position": [0, 0], "hieght": 30}]})");
        FAIL("expected a schema error");
    } catch (const ScenarioError& e) {
        CHECK(e.kind() == ScenarioError::Kind::validation);
        CHECK(std::string(e.what()).find("/sites/0/hieght") != std::string::npos);
    }
    try {
        load_scenario(R"({"sites": [)");
        FAIL("expected a parse error");
    } catch (const ScenarioError& e) {
        CHECK(e.kind() == ScenarioError::Kind::parse);
    }
    CHECK_THROWS_AS(load_scenario(R"({"sites": [{"position": "here"}]})"), ScenarioError);
    CHECK_THROWS_AS(load_scenario(R"({"radio": {"combining": "mmse"}, "sites": [{"position": [0, 0]}]})"),
                    ScenarioError);
}

TEST_CASE("missing file is an io error naming the path")
{
    try {
        load_scenario_file("/nonexistent/world.json");
        FAIL("expected an io error");
    } catch (const ScenarioError& e) {
        CHECK(e.kind() == ScenarioError::Kind::io);
        CHECK(std::string(e.what()).find("/nonexistent/world.json") != std::string::npos);
    }
}

TEST_CASE("validate_scenario")
{
    SUBCASE("valid world has no violations") { CHECK(validate_scenario(valid_world()).empty()); }

    SUBCASE("building outside bounds")
    {
        const auto v = violations_after([](Scenario& s) { s.clutter.buildings[0].footprint.x_max = 900.0; });
        REQUIRE(v.size() == 1);
        CHECK(v[0].path == "/clutter/buildings/0/footprint");
        CHECK(v[0].message.find("b0") != std::string::npos);
    }

    SUBCASE("green with empty attachment")
    {
        const auto v = violations_after([](Scenario& s) { s.greens.push_back({"g", {10.0, 10.0}}); });
        REQUIRE(v.size() == 1);
        CHECK(v[0].path == "/greens/0/attached_sectors");
    }

    SUBCASE("one invariant at a time")
    {
        const std::vector<std::pair<std::string, std::function<void(Scenario&)>>> cases = {
            {"/sites/0/position", [](Scenario& s) { s.sites[0].position = {600.0, 0.0}; }},
            {"/sites/0/sectors/1/azimuth_deg", [](Scenario& s) { s.sites[0].sectors[1].azimuth_deg = 360.0; }},
            {"/sites/0/sectors/1/id", [](Scenario& s) { s.sites[0].sectors[1].id = "s1"; }},
            {"/greens/0/position", [](Scenario& s) { s.greens.push_back({"g", {0.0, 700.0}, 0.0, {}, {"s1"}}); }},
            {"/clutter/cell_size_m", [](Scenario& s) { s.clutter.cell_size_m = 0.0; }},
            {"/clutter/buildings/0/penetration_loss_db",
             [](Scenario& s) { s.clutter.buildings[0].penetration_loss_db = -1.0; }},
            {"/radio/p_max_dbm", [](Scenario& s) { s.radio.p_min_dbm = -30.0; }},
            {"/radio/pathloss/urban/exponent", [](Scenario& s) { s.radio.pathloss[2].exponent = 0.0; }},
            {"/radio/shadowing_sigma_db/open", [](Scenario& s) { s.radio.shadowing_sigma_db[0] = -1.0; }},
            {"/traffic/indoor_fraction", [](Scenario& s) { s.traffic.indoor_fraction = 1.5; }},
            {"/traffic/voice_fraction", [](Scenario& s) { s.traffic.voice_fraction = -0.1; }},
            {"/traffic/mobiles_per_sector", [](Scenario& s) { s.traffic.mobiles_per_sector = -1; }},
        };
        for (const auto& [path, mutate] : cases) {
            CAPTURE(path);
            const auto v = violations_after(mutate);
            REQUIRE(v.size() == 1);
            CHECK(v[0].path == path);
        }
    }

    SUBCASE("every violation is reported, in order")
    {
        const auto v = violations_after([](Scenario& s) {
            s.traffic.indoor_fraction = 2.0;
            s.clutter.cell_size_m = -1.0;
        });
        REQUIRE(v.size() == 2);
        CHECK(v[0].path == "/clutter/cell_size_m");
        CHECK(v[1].path == "/traffic/indoor_fraction");
    }
}

TEST_CASE("clutter grid lookup")
{
    ClutterMap m;
    m.bounds = {0.0, 0.0, 200.0, 200.0};
    m.cell_size_m = 100.0;
    m.grid = {"ou", "su"};
    CHECK(m.class_at({50.0, 50.0}) == ClutterClass::open);
    CHECK(m.class_at({150.0, 50.0}) == ClutterClass::urban);
    CHECK(m.class_at({50.0, 150.0}) == ClutterClass::suburban);
    m.buildings.push_back({"b", {10.0, 10.0, 20.0, 20.0}, 20.0});
    CHECK(m.building_at({15.0, 15.0}) == 0u);
    CHECK_FALSE(m.building_at({25.0, 15.0}).has_value());
}

TEST_CASE("drop_mobiles")
{
    Scenario s = valid_world();

    SUBCASE("count and outdoor-only drop")
    {
        s.traffic.indoor_fraction = 0.0;
        const auto ms = drop_mobiles(s, 7);
        CHECK(ms.size() == 20);
        for (const auto& m : ms) {
            CHECK_FALSE(m.indoor);
            CHECK_FALSE(s.clutter.building_at(m.position).has_value());
            CHECK(s.clutter.bounds.contains(m.position));
        }
    }

    SUBCASE("deterministic in (scenario, seed)")
    {
        s.traffic.indoor_fraction = 0.5;
        CHECK(drop_mobiles(s, 11) == drop_mobiles(s, 11));
        CHECK_FALSE(drop_mobiles(s, 11) == drop_mobiles(s, 12));
    }

    SUBCASE("indoor share and footprint invariant")
    {
        s.traffic.indoor_fraction = 0.3;
        s.traffic.mobiles_per_sector = 100;
        std::size_t indoor = 0, total = 0;
        std::size_t voice = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed)
            for (const auto& m : drop_mobiles(s, seed)) {
                ++total;
                voice += m.service == Service::voice;
                if (m.indoor) {
                    ++indoor;
                    REQUIRE(m.building.has_value());
                    CHECK(s.clutter.buildings[*m.building].footprint.contains(m.position));
                } else {
                    CHECK_FALSE(s.clutter.building_at(m.position).has_value());
                }
                CHECK(m.sinr_target_db == s.traffic.target_db(m.service));
            }
        REQUIRE(total == 10000);
        CHECK(std::abs(static_cast<double>(indoor) / total - 0.30) <= 0.02);
        CHECK(std::abs(static_cast<double>(voice) / total - 0.5) <= 0.02);
    }

    SUBCASE("indoor users need buildings")
    {
        s.clutter.buildings.clear();
        s.traffic.indoor_fraction = 0.1;
        CHECK_THROWS_AS(drop_mobiles(s, 1), DropError);
    }

    SUBCASE("adding greens does not change the drop")
    {
        s.traffic.indoor_fraction = 0.3;
        const Scenario g = s.with_greens({{"g", {0.0, 50.0}, 0.0, AntennaPattern::omni(5.0), {"s1"}}});
        CHECK(differs_only_in_greens(s, g));
        CHECK(drop_mobiles(s, 3) == drop_mobiles(g, 3));
    }
}

TEST_CASE("example scenarios differ only in greens")
{
    const Scenario b = testing::example_baseline();
    const Scenario g = testing::example_green();
    CHECK(b.sites.size() == 7);
    CHECK(b.greens.empty());
    CHECK(g.greens.size() == 1);
    CHECK(differs_only_in_greens(b, g));
    CHECK(b.traffic.indoor_fraction == doctest::Approx(0.3));
    Scenario moved = g;
    moved.sites[1].position.x += 1.0;
    CHECK_FALSE(differs_only_in_greens(b, moved));
}
