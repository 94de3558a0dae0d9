#ifndef GREENCELL_METRICS_HPP
#define GREENCELL_METRICS_HPP

#include "greencell/powerctl.hpp"
#include "greencell/scenario.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace greencell {

struct PopulationFilter
{
    Point2 center;
    double radius_m = std::numeric_limits<double>::infinity();
    bool indoor_only = false;

    bool accepts(const MobileStation& ms) const noexcept
    {
        return (!indoor_only || ms.indoor) && distance(center, ms.position) <= radius_m;
    }
};

/// Tx powers (dBm) of the mobiles the filter accepts. Outage mobiles are
/// included at their pinned power.
std::vector<double> filter_population(const std::vector<MobileStation>& mobiles, const PowerControlResult& results,
                                      const PopulationFilter& f);

struct CdfPoint
{
    double power_dbm;
    double cum_frac;
};

class EmptySampleError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Empirical CDF at the distinct sorted sample values (right-continuous steps).
std::vector<CdfPoint> tx_power_cdf(std::vector<double> samples);

double mean(const std::vector<double>& samples);
double median(std::vector<double> samples);
/// Fraction of samples strictly below the threshold.
double fraction_below(const std::vector<double>& samples, double threshold);

struct ComparisonReport
{
    double mean_delta_db = 0.0;   ///< mean(baseline) - mean(green), over dBm values
    double median_delta_db = 0.0;
    double baseline_mean_dbm = 0.0;
    double green_mean_dbm = 0.0;
    double baseline_median_dbm = 0.0;
    double green_median_dbm = 0.0;
    double frac_below_target_baseline = 0.0;
    double frac_below_target_green = 0.0;
    double target_dbm = 4.0;
    std::size_t baseline_samples = 0;
    std::size_t green_samples = 0;
    std::vector<CdfPoint> baseline_cdf;
    std::vector<CdfPoint> green_cdf;
    std::size_t snapshots = 0;
    PopulationFilter filter;
};

ComparisonReport compare_runs(const std::vector<double>& baseline, const std::vector<double>& green, double target_dbm);

/// One summary line `metric,value`.
using SummaryRow = std::pair<std::string, std::string>;

std::vector<SummaryRow> summary_rows(const ComparisonReport& report);

struct NamedCdf
{
    std::string run;
    std::vector<CdfPoint> points;
};

struct ReportFiles
{
    std::string cdf_csv;
    std::string summary_csv;
    std::string cdf_svg; ///< empty when not written
};

class ReportIoError : public std::runtime_error
{
public:
    ReportIoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path)
    {
    }
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Writes `<prefix>_cdf.csv`, `<prefix>_summary.csv` and optionally `<prefix>_cdf.svg`.
/// Output bytes depend only on the arguments.
ReportFiles emit_report(const std::vector<SummaryRow>& summary, const std::vector<NamedCdf>& cdfs,
                        const std::string& path_prefix, bool write_svg = true);

/// Fixed-format number for report files.
std::string format_number(double v);

} // namespace greencell

#endif
