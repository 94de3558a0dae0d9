#include "greencell/cli.hpp"

#include "greencell/campaign.hpp"
#include "greencell/metrics.hpp"
#include "greencell/propagation.hpp"
#include "greencell/rng.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace greencell {

namespace {

/// Error that maps straight to an exit code.
struct CommandError
{
    int code;
    std::string message;
};

void check_spec(const RunSpec& spec)
{
    if (spec.snapshots < 1)
        throw CommandError{kExitValidation, "--snapshots must be at least 1"};
    if (spec.jobs < 1)
        throw CommandError{kExitValidation, "--jobs must be at least 1"};
    if (spec.filter_radius_m && !(*spec.filter_radius_m >= 0.0))
        throw CommandError{kExitValidation, "--filter-radius must be >= 0"};
    if (!std::isfinite(spec.target_dbm))
        throw CommandError{kExitValidation, "--target-dbm must be finite"};
    if (spec.out_prefix.empty())
        throw CommandError{kExitValidation, "--out must not be empty"};
}

Scenario load(const std::string& path, const char* flag)
{
    if (path.empty())
        throw CommandError{kExitValidation, std::string(flag) + " is required"};
    return load_scenario_file(path);
}

/// Explicit center wins; otherwise the first green antenna of the scenario;
/// otherwise the whole map.
PopulationFilter resolve_filter(const RunSpec& spec, const Scenario& s)
{
    PopulationFilter f;
    f.indoor_only = spec.indoor_only;
    if (spec.filter_center) {
        f.center = *spec.filter_center;
        f.radius_m = spec.filter_radius_m.value_or(kDefaultFilterRadiusM);
    } else if (!s.greens.empty()) {
        f.center = s.greens.front().position;
        f.radius_m = spec.filter_radius_m.value_or(kDefaultFilterRadiusM);
    } else {
        const Rect& b = s.clutter.bounds;
        f.center = {0.5 * (b.x_min + b.x_max), 0.5 * (b.y_min + b.y_max)};
        if (spec.filter_radius_m)
            f.radius_m = *spec.filter_radius_m;
    }
    return f;
}

std::vector<SummaryRow> filter_rows(const PopulationFilter& f)
{
    return {
        {"filter_center_x_m", format_number(f.center.x)},
        {"filter_center_y_m", format_number(f.center.y)},
        {"filter_radius_m", format_number(f.radius_m)},
        {"filter_indoor_only", f.indoor_only ? "1" : "0"},
    };
}

void dump_gains(const Scenario& s, const RunSpec& spec, std::ostream& err)
{
    const std::uint64_t seed = snapshot_seed(spec.seed, 0);
    const auto mobiles = drop_mobiles(s, seed);
    const auto gm = build_gain_matrix(s, mobiles, derive_seed(seed, "shadowing"));
    const std::string path = spec.out_prefix + "_gains.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ReportIoError(path, "cannot open for writing");
    write_gain_matrix_csv(out, gm, receive_points(s));
    if (!out)
        throw ReportIoError(path, "write failed");
    err << "wrote " << path << " (snapshot 0)\n";
}

struct RunStats
{
    std::size_t mobiles = 0;
    std::size_t outages = 0;
    std::size_t unconverged = 0;
    double iterations = 0.0;
};

RunStats stats_of(const std::vector<PowerControlResult*>& results)
{
    RunStats st;
    for (const auto* r : results) {
        st.mobiles += r->tx_power_dbm.size();
        for (bool o : r->outage)
            st.outages += o;
        st.unconverged += !r->converged;
        st.iterations += static_cast<double>(r->iterations);
    }
    if (!results.empty())
        st.iterations /= static_cast<double>(results.size());
    return st;
}

double safe_ratio(std::size_t num, std::size_t den)
{
    return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

template <typename Fn>
int guarded(std::ostream& err, const char* command, Fn&& fn)
{
    try {
        return fn();
    } catch (const CommandError& e) {
        err << command << ": " << e.message << '\n';
        return e.code;
    } catch (const ScenarioError& e) {
        err << command << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const DropError& e) {
        err << command << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const PairingError& e) {
        err << command << ": pairing violation: " << e.what() << '\n';
        return kExitPairing;
    } catch (const std::exception& e) {
        err << command << ": " << e.what() << '\n';
        return kExitRuntime;
    }
}

std::vector<std::string> default_values(SweepAxis axis, const Scenario& s)
{
    std::vector<std::string> v;
    switch (axis) {
    case SweepAxis::seed:
        throw CommandError{kExitValidation, "seed sweeps need --values"};
    case SweepAxis::green_count:
        for (std::size_t k = 0; k <= s.greens.size(); ++k)
            v.push_back(std::to_string(k));
        break;
    case SweepAxis::combining:
        v = {"mrc", "selection", "egc"};
        break;
    }
    return v;
}

template <typename T>
T parse_integer(const std::string& text)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw CommandError{kExitValidation, "invalid sweep value \"" + text + "\""};
    return value;
}

} // namespace

std::optional<SweepAxis> parse_sweep_axis(const std::string& s)
{
    if (s == "seed")
        return SweepAxis::seed;
    if (s == "green_count")
        return SweepAxis::green_count;
    if (s == "combining")
        return SweepAxis::combining;
    return std::nullopt;
}

int cmd_run(const RunSpec& spec, std::ostream& err)
{
    return guarded(err, "run", [&] {
        check_spec(spec);
        const Scenario s = load(spec.scenario_path, "--scenario");
        CampaignOptions opts;
        opts.seed = spec.seed;
        opts.snapshots = spec.snapshots;
        opts.combining = spec.combining.value_or(s.radio.combining);
        opts.jobs = spec.jobs;
        if (spec.dump_gains)
            dump_gains(s, spec, err);

        auto snapshots = run_campaign(s, opts);
        const PopulationFilter filter = resolve_filter(spec, s);
        const auto samples = pooled_samples(snapshots, filter);
        if (samples.empty())
            throw CommandError{kExitRuntime, "no mobiles passed the population filter"};

        std::vector<PowerControlResult*> results;
        for (auto& snap : snapshots)
            results.push_back(&snap.result);
        const RunStats st = stats_of(results);

        std::vector<SummaryRow> rows = {
            {"snapshots", std::to_string(spec.snapshots)},
            {"seed", std::to_string(spec.seed)},
            {"combining", std::string(to_string(opts.combining))},
            {"mobiles", std::to_string(st.mobiles)},
            {"samples", std::to_string(samples.size())},
            {"mean_dbm", format_number(mean(samples))},
            {"median_dbm", format_number(median(samples))},
            {"target_dbm", format_number(spec.target_dbm)},
            {"frac_below_target", format_number(fraction_below(samples, spec.target_dbm))},
            {"outage_fraction", format_number(safe_ratio(st.outages, st.mobiles))},
            {"mean_iterations", format_number(st.iterations)},
            {"unconverged_snapshots", std::to_string(st.unconverged)},
        };
        for (auto& r : filter_rows(filter))
            rows.push_back(std::move(r));
        const auto files = emit_report(rows, {{"run", tx_power_cdf(samples)}}, spec.out_prefix);
        err << "run: " << spec.snapshots << " snapshots, " << samples.size() << " samples -> " << files.summary_csv
            << '\n';
        return kExitOk;
    });
}

int cmd_compare(const RunSpec& spec, std::ostream& err)
{
    return guarded(err, "compare", [&] {
        check_spec(spec);
        const Scenario baseline = load(spec.scenario_path, "--scenario");
        const Scenario green = load(spec.green_scenario_path, "--green-scenario");
        if (!differs_only_in_greens(baseline, green))
            throw PairingError("\"" + spec.scenario_path + "\" and \"" + spec.green_scenario_path +
                               "\" differ outside the greens list");
        const Combining combining = spec.combining.value_or(baseline.radio.combining);
        if (spec.dump_gains)
            dump_gains(green, spec, err);

        const std::vector<Variant> variants = {{&baseline, combining}, {&green, combining}};
        auto snapshots = run_variant_campaign(variants, spec.seed, spec.snapshots, spec.jobs);

        const PopulationFilter filter = resolve_filter(spec, green);
        const auto base_samples = pooled_samples(snapshots, 0, filter);
        const auto green_samples = pooled_samples(snapshots, 1, filter);
        if (base_samples.empty())
            throw CommandError{kExitRuntime, "no mobiles passed the population filter"};

        ComparisonReport report = compare_runs(base_samples, green_samples, spec.target_dbm);
        report.snapshots = spec.snapshots;
        report.filter = filter;

        std::size_t raised = 0;
        std::vector<PowerControlResult*> base_results, green_results;
        for (auto& snap : snapshots) {
            base_results.push_back(&snap.results[0]);
            green_results.push_back(&snap.results[1]);
            for (std::size_t i = 0; i < snap.mobiles.size(); ++i)
                raised += snap.results[1].tx_power_dbm[i] > snap.results[0].tx_power_dbm[i] + 1e-9;
        }
        const RunStats bst = stats_of(base_results);
        const RunStats gst = stats_of(green_results);

        auto rows = summary_rows(report);
        rows.insert(rows.end(), {
                                    {"seed", std::to_string(spec.seed)},
                                    {"combining", std::string(to_string(combining))},
                                    {"mobiles", std::to_string(bst.mobiles)},
                                    {"mobiles_raised", std::to_string(raised)},
                                    {"outage_fraction_baseline", format_number(safe_ratio(bst.outages, bst.mobiles))},
                                    {"outage_fraction_green", format_number(safe_ratio(gst.outages, gst.mobiles))},
                                    {"unconverged_snapshots_baseline", std::to_string(bst.unconverged)},
                                    {"unconverged_snapshots_green", std::to_string(gst.unconverged)},
                                });
        const auto files =
            emit_report(rows, {{"baseline", report.baseline_cdf}, {"green", report.green_cdf}}, spec.out_prefix);
        err << "compare: mean delta " << format_number(report.mean_delta_db) << " dB, median delta "
            << format_number(report.median_delta_db) << " dB -> " << files.summary_csv << '\n';
        return kExitOk;
    });
}

int cmd_sweep(const RunSpec& spec, std::ostream& err)
{
    return guarded(err, "sweep", [&] {
        check_spec(spec);
        const Scenario s = load(spec.scenario_path, "--scenario");
        const Combining combining = spec.combining.value_or(s.radio.combining);
        const auto values = spec.sweep_values.empty() ? default_values(spec.axis, s) : spec.sweep_values;
        const PopulationFilter filter = resolve_filter(spec, s);

        // Rows of (value, samples, results).
        struct Row
        {
            std::string value;
            std::vector<double> samples;
            std::vector<PowerControlResult*> results;
        };
        std::vector<Row> rows;
        const char* axis_name = "seed";
        std::vector<std::vector<SnapshotOutcome>> seed_runs;
        std::vector<VariantSnapshot> variant_runs;
        std::vector<Scenario> worlds;

        if (spec.axis == SweepAxis::seed) {
            seed_runs.reserve(values.size());
            for (const auto& v : values) {
                CampaignOptions opts;
                opts.seed = parse_integer<std::uint64_t>(v);
                opts.snapshots = spec.snapshots;
                opts.combining = combining;
                opts.jobs = spec.jobs;
                seed_runs.push_back(run_campaign(s, opts));
                Row row{v, pooled_samples(seed_runs.back(), filter), {}};
                for (auto& snap : seed_runs.back())
                    row.results.push_back(&snap.result);
                rows.push_back(std::move(row));
            }
        } else {
            std::vector<Combining> modes;
            if (spec.axis == SweepAxis::green_count) {
                axis_name = "green_count";
                for (const auto& v : values) {
                    const auto k = parse_integer<std::size_t>(v);
                    if (k > s.greens.size())
                        throw CommandError{kExitValidation, "green_count " + v + " exceeds the " +
                                                                std::to_string(s.greens.size()) +
                                                                " greens of the scenario"};
                    worlds.push_back(s.with_greens({s.greens.begin(), s.greens.begin() + static_cast<long>(k)}));
                    modes.push_back(combining);
                }
            } else {
                axis_name = "combining";
                for (const auto& v : values) {
                    const auto c = parse_combining(v);
                    if (!c)
                        throw CommandError{kExitValidation, "unknown combining mode \"" + v + "\""};
                    worlds.push_back(s);
                    modes.push_back(*c);
                }
            }
            std::vector<Variant> variants;
            for (std::size_t k = 0; k < worlds.size(); ++k)
                variants.push_back({&worlds[k], modes[k]});
            variant_runs = run_variant_campaign(variants, spec.seed, spec.snapshots, spec.jobs);
            for (std::size_t k = 0; k < values.size(); ++k) {
                Row row{values[k], pooled_samples(variant_runs, k, filter), {}};
                for (auto& snap : variant_runs)
                    row.results.push_back(&snap.results[k]);
                rows.push_back(std::move(row));
            }
        }

        std::ostringstream csv;
        csv << "axis,value,snapshots,samples,mean_dbm,median_dbm,frac_below_target,outage_fraction\n";
        for (const auto& row : rows) {
            const RunStats st = stats_of(row.results);
            const bool any = !row.samples.empty();
            csv << axis_name << ',' << row.value << ',' << spec.snapshots << ',' << row.samples.size() << ','
                << format_number(any ? mean(row.samples) : NAN) << ',' << format_number(any ? median(row.samples) : NAN)
                << ',' << format_number(any ? fraction_below(row.samples, spec.target_dbm) : NAN) << ','
                << format_number(safe_ratio(st.outages, st.mobiles)) << '\n';
        }
        const std::string path = spec.out_prefix + "_sweep.csv";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ReportIoError(path, "cannot open for writing");
        out << csv.str();
        if (!out)
            throw ReportIoError(path, "write failed");
        err << "sweep: " << rows.size() << " rows -> " << path << '\n';
        return kExitOk;
    });
}

} // namespace greencell
