#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "greencell/campaign.hpp"
#include "support.hpp"

#include <atomic>
#include <stdexcept>

using namespace greencell;

namespace {

Scenario small_world()
{
    Scenario s;
    s.clutter.bounds = {-1500.0, -1500.0, 1500.0, 1500.0};
    s.sites.push_back({"A", {-500.0, 0.0}, {{"a1", 60.0}, {"a2", 180.0}, {"a3", 300.0}}});
    s.sites.push_back({"B", {500.0, 0.0}, {{"b1", 60.0}, {"b2", 180.0}, {"b3", 300.0}}});
    s.clutter.buildings.push_back({"h", {-100.0, 200.0, 100.0, 400.0}, 20.0});
    s.traffic.mobiles_per_sector = 5;
    s.traffic.indoor_fraction = 0.3;
    s.traffic.voice_sinr_target_db = -3.0;
    s.traffic.data_sinr_target_db = 2.0;
    s.radio.thermal_noise_dbm = -110.0;
    return s;
}

Scenario with_green(const Scenario& s)
{
    return s.with_greens({{"g", {0.0, 300.0}, 0.0, AntennaPattern::omni(5.0), {"a1", "b3"}}});
}

} // namespace

TEST_CASE("snapshot seeds")
{
    CHECK(snapshot_seed(1, 0) == snapshot_seed(1, 0));
    CHECK(snapshot_seed(1, 0) != snapshot_seed(1, 1));
    CHECK(snapshot_seed(1, 0) != snapshot_seed(2, 0));
}

TEST_CASE("run_snapshot is pure in its seed")
{
    const Scenario s = small_world();
    const auto a = run_snapshot(s, 9, Combining::mrc);
    const auto b = run_snapshot(s, 9, Combining::mrc);
    CHECK(a.mobiles == b.mobiles);
    CHECK(a.association.serving == b.association.serving);
    CHECK(a.result.tx_power_dbm == b.result.tx_power_dbm);
    CHECK(a.mobiles.size() == 30);
    for (double p : a.result.tx_power_dbm) {
        CHECK(p >= s.radio.p_min_dbm);
        CHECK(p <= s.radio.p_max_dbm);
    }
}

TEST_CASE("campaign output does not depend on the worker count")
{
    const Scenario s = small_world();
    CampaignOptions o;
    o.seed = 4;
    o.snapshots = 12;
    const auto one = run_campaign(s, o);
    o.jobs = 4;
    const auto four = run_campaign(s, o);
    REQUIRE(one.size() == 12);
    REQUIRE(four.size() == 12);
    for (std::size_t k = 0; k < one.size(); ++k) {
        CHECK(one[k].mobiles == four[k].mobiles);
        CHECK(one[k].result.tx_power_dbm == four[k].result.tx_power_dbm);
    }
    const PopulationFilter all;
    CHECK(pooled_samples(one, all) == pooled_samples(four, all));
    CHECK(pooled_samples(one, all).size() == 12 * 30);
}

TEST_CASE("paired variants")
{
    const Scenario base = small_world();
    const Scenario green = with_green(base);

    SUBCASE("green never raises power under mrc")
    {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto v = run_variant_snapshot({{&base, Combining::mrc}, {&green, Combining::mrc}}, seed);
            REQUIRE(v.results.size() == 2);
            CHECK(v.results[0].iterations == v.results[1].iterations);
            for (std::size_t i = 0; i < v.mobiles.size(); ++i)
                CHECK(v.results[1].tx_power_dbm[i] <= v.results[0].tx_power_dbm[i] + 1e-9);
        }
    }

    SUBCASE("mrc never needs more power than selection")
    {
        const auto v = run_variant_snapshot({{&green, Combining::mrc}, {&green, Combining::selection}}, 3);
        for (std::size_t i = 0; i < v.mobiles.size(); ++i)
            CHECK(v.results[0].tx_power_dbm[i] <= v.results[1].tx_power_dbm[i] + 1e-9);
    }

    SUBCASE("variants must differ only in greens")
    {
        Scenario moved = green;
        moved.sites[1].position.x += 10.0;
        CHECK_THROWS_AS(run_variant_snapshot({{&base, Combining::mrc}, {&moved, Combining::mrc}}, 1), PairingError);
        Scenario loud = base;
        loud.traffic.mobiles_per_sector = 6;
        CHECK_THROWS_AS(run_variant_snapshot({{&base, Combining::mrc}, {&loud, Combining::mrc}}, 1), PairingError);
    }

    SUBCASE("campaign pools per variant in snapshot order")
    {
        const auto c = run_variant_campaign({{&base, Combining::mrc}, {&green, Combining::mrc}}, 2, 6, 3);
        const auto c1 = run_variant_campaign({{&base, Combining::mrc}, {&green, Combining::mrc}}, 2, 6, 1);
        const PopulationFilter all;
        CHECK(pooled_samples(c, 0, all) == pooled_samples(c1, 0, all));
        CHECK(pooled_samples(c, 1, all) == pooled_samples(c1, 1, all));
        const auto b = pooled_samples(c, 0, all);
        const auto g = pooled_samples(c, 1, all);
        REQUIRE(b.size() == g.size());
        CHECK(compare_runs(b, g, 4.0).mean_delta_db >= 0.0);
    }
}

TEST_CASE("solve_jointly aligns iteration counts")
{
    const Scenario base = small_world();
    const Scenario green = with_green(base);
    const auto ms = drop_mobiles(base, 8);
    const auto gm0 = build_gain_matrix(base, ms, 8);
    const auto gm1 = build_gain_matrix(green, ms, 8);
    const auto assoc = associate(gm0);
    const std::vector<UplinkProblem> problems{
        make_problem(base, ms, gm0, assoc, receive_branches(base), Combining::mrc),
        make_problem(green, ms, gm1, assoc, receive_branches(green), Combining::mrc),
    };
    const auto solo0 = solve_power_control(problems[0]);
    const auto solo1 = solve_power_control(problems[1]);
    const auto joint = solve_jointly(problems, {});
    REQUIRE(joint.size() == 2);
    CHECK(joint[0].iterations == joint[1].iterations);
    CHECK(joint[0].iterations == std::max(solo0.iterations, solo1.iterations));
}

TEST_CASE("parallel_for")
{
    std::atomic<int> sum{0};
    parallel_for(100, 4, [&](std::size_t i) { sum += static_cast<int>(i); });
    CHECK(sum == 4950);

    try {
        parallel_for(50, 4, [](std::size_t i) {
            if (i == 7 || i == 31)
                throw std::runtime_error("fail " + std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "fail 7");
    }
}
