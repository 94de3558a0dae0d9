#ifndef GREENCELL_CLI_HPP
#define GREENCELL_CLI_HPP

#include "greencell/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace greencell {

/// Process exit codes; the only machine-readable contract of the CLI.
enum ExitCode : int {
    kExitOk = 0,
    kExitRuntime = 1,
    kExitValidation = 2,
    kExitPairing = 3,
};

enum class SweepAxis { seed, green_count, combining };

struct RunSpec
{
    std::string scenario_path;
    std::string green_scenario_path;
    std::uint64_t seed = 1;
    std::size_t snapshots = 100;
    std::optional<Combining> combining; ///< scenario's radio.combining when unset
    std::optional<Point2> filter_center;
    std::optional<double> filter_radius_m;
    bool indoor_only = false;
    double target_dbm = 4.0;
    std::string out_prefix = "greencell";
    unsigned jobs = 1;
    bool dump_gains = false;

    SweepAxis axis = SweepAxis::seed;
    std::vector<std::string> sweep_values;
};

inline constexpr double kDefaultFilterRadiusM = 300.0;

/// Single-scenario campaign: writes <out>_cdf.csv, <out>_summary.csv, <out>_cdf.svg.
int cmd_run(const RunSpec& spec, std::ostream& err);

/// Paired baseline vs green campaign on shared seeds.
int cmd_compare(const RunSpec& spec, std::ostream& err);

/// One summary row per axis value in <out>_sweep.csv.
int cmd_sweep(const RunSpec& spec, std::ostream& err);

std::optional<SweepAxis> parse_sweep_axis(const std::string& s);

} // namespace greencell

#endif
