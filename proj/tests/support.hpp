#ifndef GREENCELL_TESTS_SUPPORT_HPP
#define GREENCELL_TESTS_SUPPORT_HPP

#include "greencell/powerctl.hpp"
#include "greencell/scenario.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace greencell::testing {

inline std::string source_path(const std::string& rel)
{
    return std::string(GREENCELL_SOURCE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("greencell_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Scenario example_baseline()
{
    return load_scenario_file(source_path("scenarios/baseline.example.json"));
}

inline Scenario example_green()
{
    return load_scenario_file(source_path("scenarios/green.example.json"));
}

/// Random small world: 1..4 sites of 1..3 sectors on a 2 km square, 0..3 greens.
inline Scenario random_scenario(std::mt19937_64& rng, std::int64_t mobiles_per_sector = 4)
{
    std::uniform_real_distribution<double> pos(-900.0, 900.0);
    std::uniform_int_distribution<int> nsites(1, 4), nsec(1, 3), ngreens(0, 3);
    std::uniform_real_distribution<double> az(0.0, 359.0);

    Scenario s;
    s.clutter.bounds = {-1000.0, -1000.0, 1000.0, 1000.0};
    s.clutter.buildings.push_back({"b0", {-200.0, -200.0, 0.0, 0.0}, 15.0});
    s.clutter.buildings.push_back({"b1", {300.0, 100.0, 450.0, 400.0}, 20.0});
    s.traffic.mobiles_per_sector = mobiles_per_sector;
    s.traffic.indoor_fraction = 0.3;
    const int sites = nsites(rng);
    for (int i = 0; i < sites; ++i) {
        Site site{"site" + std::to_string(i), {pos(rng), pos(rng)}, {}};
        const int n = nsec(rng);
        for (int k = 0; k < n; ++k)
            site.sectors.push_back({"s" + std::to_string(i) + "_" + std::to_string(k), az(rng),
                                    AntennaPattern::sector(15.0), 43.0, 0.0});
        s.sites.push_back(site);
    }
    const auto refs = s.sector_refs();
    std::uniform_int_distribution<std::size_t> pick(0, refs.size() - 1);
    const int greens = ngreens(rng);
    for (int g = 0; g < greens; ++g) {
        GreenAntenna ga;
        ga.id = "g" + std::to_string(g);
        ga.position = {pos(rng), pos(rng)};
        ga.attached_sectors.push_back(s.sector(pick(rng)).id);
        const std::string extra = s.sector(pick(rng)).id;
        if (extra != ga.attached_sectors.front())
            ga.attached_sectors.push_back(extra);
        s.greens.push_back(ga);
    }
    return s;
}

/// Random full-interference problem with 1..max_points branches per mobile.
inline UplinkProblem random_problem(std::mt19937_64& rng, std::size_t mobiles, std::size_t points,
                                    std::size_t max_branches, Combining combining)
{
    std::uniform_real_distribution<double> gain_db(-140.0, -70.0), noise_db(-110.0, -95.0), target_db(-5.0, 10.0);
    std::vector<double> gain(mobiles * points);
    for (auto& g : gain)
        g = db_to_linear(gain_db(rng));
    std::vector<double> noise(points);
    for (auto& n : noise)
        n = db_to_linear(noise_db(rng));
    std::vector<std::vector<std::size_t>> branches(mobiles);
    std::uniform_int_distribution<std::size_t> nb(1, std::min(max_branches, points));
    for (auto& b : branches) {
        std::vector<std::size_t> all(points);
        for (std::size_t r = 0; r < points; ++r)
            all[r] = r;
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(nb(rng));
        b = all;
    }
    std::vector<double> target(mobiles);
    for (auto& t : target)
        t = db_to_linear(target_db(rng));
    return UplinkProblem::full_interference(mobiles, points, std::move(gain), std::move(noise), std::move(branches),
                                            std::move(target), combining, PowerLimits{});
}

} // namespace greencell::testing

#endif
