// greencell-sim: uplink Tx-power Monte Carlo campaigns with receive-only antennas.
//
//   greencell-sim run     --scenario baseline.json --snapshots 200 --out out/base
//   greencell-sim compare --scenario baseline.json --green-scenario green.json --indoor-only
//   greencell-sim sweep   --scenario green.json --axis green_count

#include "greencell/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

greencell::Point2 parse_center(const std::string& text)
{
    std::istringstream in(text);
    greencell::Point2 p;
    char comma = 0;
    if (!(in >> p.x >> comma >> p.y) || comma != ',' || !in.eof())
        throw CLI::ValidationError("--filter-center", "expected x,y in meters");
    return p;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace greencell;

    CLI::App app{"Uplink power-control Monte Carlo simulator with receive-only green antennas"};
    app.require_subcommand(1);

    RunSpec spec;
    std::string combining;
    std::string center;
    double radius = 0.0;
    std::string axis = "seed";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", spec.scenario_path, "scenario JSON document")->required();
        cmd->add_option("--seed", spec.seed, "master seed")->capture_default_str();
        cmd->add_option("--snapshots", spec.snapshots, "Monte Carlo snapshots")->capture_default_str();
        cmd->add_option("--combining", combining, "mrc|sel|egc (default: scenario radio.combining)")
            ->check(CLI::IsMember({"mrc", "sel", "selection", "egc"}));
        cmd->add_option("--filter-center", center, "population filter center x,y [m]");
        cmd->add_option("--filter-radius", radius, "population filter radius [m] (default 300 around a center)");
        cmd->add_flag("--indoor-only", spec.indoor_only, "keep indoor mobiles only");
        cmd->add_option("--target-dbm", spec.target_dbm, "Tx power target for the below-target fraction")
            ->capture_default_str();
        cmd->add_option("--out", spec.out_prefix, "output file prefix")->capture_default_str();
        cmd->add_option("--jobs", spec.jobs, "worker threads")->capture_default_str();
        cmd->add_flag("--dump-gains", spec.dump_gains, "write snapshot 0 channel tables to <out>_gains.csv");
    };

    auto* run = app.add_subcommand("run", "campaign over one scenario");
    add_common(run);

    auto* compare = app.add_subcommand("compare", "paired baseline vs green-antenna campaign");
    add_common(compare);
    compare->add_option("--green-scenario", spec.green_scenario_path, "scenario with green antennas")->required();

    auto* sweep = app.add_subcommand("sweep", "one summary row per axis value");
    add_common(sweep);
    sweep->add_option("--axis", axis, "seed|green_count|combining")
        ->check(CLI::IsMember({"seed", "green_count", "combining"}))
        ->capture_default_str();
    sweep->add_option("--values", spec.sweep_values, "comma separated axis values")->delimiter(',');

    try {
        app.parse(argc, argv);
        if (!combining.empty())
            spec.combining = parse_combining(combining);
        if (!center.empty())
            spec.filter_center = parse_center(center);
        for (auto* cmd : {run, compare, sweep})
            if (cmd->parsed() && cmd->count("--filter-radius"))
                spec.filter_radius_m = radius;
        spec.axis = parse_sweep_axis(axis).value_or(SweepAxis::seed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    if (run->parsed())
        return cmd_run(spec, std::cerr);
    if (compare->parsed())
        return cmd_compare(spec, std::cerr);
    return cmd_sweep(spec, std::cerr);
}
