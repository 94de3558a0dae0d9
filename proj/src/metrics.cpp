#include "greencell/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace greencell {

std::vector<double> filter_population(const std::vector<MobileStation>& mobiles, const PowerControlResult& results,
                                      const PopulationFilter& f)
{
    if (results.tx_power_dbm.size() != mobiles.size())
        throw std::invalid_argument("power-control results are not aligned with the mobiles");
    std::vector<double> out;
    for (std::size_t i = 0; i < mobiles.size(); ++i)
        if (f.accepts(mobiles[i]))
            out.push_back(results.tx_power_dbm[i]);
    return out;
}

std::vector<CdfPoint> tx_power_cdf(std::vector<double> samples)
{
    if (samples.empty())
        throw EmptySampleError("cannot build a CDF from an empty sample list");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<CdfPoint> cdf;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i])
            continue;
        cdf.push_back({samples[i], static_cast<double>(i + 1) / n});
    }
    cdf.back().cum_frac = 1.0;
    return cdf;
}

double mean(const std::vector<double>& samples)
{
    if (samples.empty())
        throw EmptySampleError("mean of an empty sample list");
    return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double median(std::vector<double> samples)
{
    if (samples.empty())
        throw EmptySampleError("median of an empty sample list");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

double fraction_below(const std::vector<double>& samples, double threshold)
{
    if (samples.empty())
        throw EmptySampleError("fraction of an empty sample list");
    const auto below = std::count_if(samples.begin(), samples.end(), [&](double v) { return v < threshold; });
    return static_cast<double>(below) / static_cast<double>(samples.size());
}

ComparisonReport compare_runs(const std::vector<double>& baseline, const std::vector<double>& green, double target_dbm)
{
    if (baseline.empty() || green.empty())
        throw EmptySampleError(baseline.empty() ? "baseline run has no samples" : "green run has no samples");
    ComparisonReport r;
    r.baseline_mean_dbm = mean(baseline);
    r.green_mean_dbm = mean(green);
    r.baseline_median_dbm = median(baseline);
    r.green_median_dbm = median(green);
    r.mean_delta_db = r.baseline_mean_dbm - r.green_mean_dbm;
    r.median_delta_db = r.baseline_median_dbm - r.green_median_dbm;
    r.frac_below_target_baseline = fraction_below(baseline, target_dbm);
    r.frac_below_target_green = fraction_below(green, target_dbm);
    r.target_dbm = target_dbm;
    r.baseline_samples = baseline.size();
    r.green_samples = green.size();
    r.baseline_cdf = tx_power_cdf(baseline);
    r.green_cdf = tx_power_cdf(green);
    return r;
}

std::string format_number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    // Avoid "-0.000000".
    if (std::string_view(buf) == "-0.000000")
        return "0.000000";
    return buf;
}

std::vector<SummaryRow> summary_rows(const ComparisonReport& r)
{
    return {
        {"mean_delta_db", format_number(r.mean_delta_db)},
        {"median_delta_db", format_number(r.median_delta_db)},
        {"baseline_mean_dbm", format_number(r.baseline_mean_dbm)},
        {"green_mean_dbm", format_number(r.green_mean_dbm)},
        {"baseline_median_dbm", format_number(r.baseline_median_dbm)},
        {"green_median_dbm", format_number(r.green_median_dbm)},
        {"target_dbm", format_number(r.target_dbm)},
        {"frac_below_target_baseline", format_number(r.frac_below_target_baseline)},
        {"frac_below_target_green", format_number(r.frac_below_target_green)},
        {"baseline_samples", std::to_string(r.baseline_samples)},
        {"green_samples", std::to_string(r.green_samples)},
        {"snapshots", std::to_string(r.snapshots)},
        {"filter_center_x_m", format_number(r.filter.center.x)},
        {"filter_center_y_m", format_number(r.filter.center.y)},
        {"filter_radius_m", format_number(r.filter.radius_m)},
        {"filter_indoor_only", r.filter.indoor_only ? "1" : "0"},
    };
}

namespace {

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ReportIoError(path, "cannot open for writing");
    out << content;
    out.flush();
    if (!out)
        throw ReportIoError(path, "write failed");
}

// Two-or-more-curve step plot.
std::string render_svg(const std::vector<NamedCdf>& cdfs)
{
    constexpr double kWidth = 640, kHeight = 400, kLeft = 60, kRight = 20, kTop = 20, kBottom = 50;
    static const char* const kColors[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd"};

    double lo = INFINITY, hi = -INFINITY;
    for (const auto& c : cdfs)
        for (const auto& p : c.points) {
            lo = std::min(lo, p.power_dbm);
            hi = std::max(hi, p.power_dbm);
        }
    if (!(lo < hi)) {
        lo = std::isfinite(lo) ? lo - 1.0 : 0.0;
        hi = lo + 2.0;
    }
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto sx = [&](double v) { return kLeft + (v - lo) / (hi - lo) * plot_w; };
    const auto sy = [&](double f) { return kTop + (1.0 - f) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-size=\"12\">Tx power [dBm]</text>\n";
    svg << "<text x=\"15\" y=\"" << kTop + plot_h / 2 << "\" transform=\"rotate(-90 15 " << kTop + plot_h / 2
        << ")\" text-anchor=\"middle\" font-size=\"12\">CDF</text>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"" << kHeight - 30 << "\" font-size=\"10\">" << format_number(lo)
        << "</text>\n";
    svg << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kHeight - 30 << "\" text-anchor=\"end\" font-size=\"10\">"
        << format_number(hi) << "</text>\n";
    for (std::size_t k = 0; k < cdfs.size(); ++k) {
        const char* color = kColors[k % std::size(kColors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        double prev = 0.0;
        svg << format_number(sx(lo)) << ',' << format_number(sy(0.0));
        for (const auto& p : cdfs[k].points) {
            svg << ' ' << format_number(sx(p.power_dbm)) << ',' << format_number(sy(prev));
            svg << ' ' << format_number(sx(p.power_dbm)) << ',' << format_number(sy(p.cum_frac));
            prev = p.cum_frac;
        }
        svg << ' ' << format_number(sx(hi)) << ',' << format_number(sy(prev)) << "\"/>\n";
        svg << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 15 + 15 * static_cast<double>(k) << "\" fill=\"" << color
            << "\" font-size=\"12\">" << cdfs[k].run << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

ReportFiles emit_report(const std::vector<SummaryRow>& summary, const std::vector<NamedCdf>& cdfs,
                        const std::string& path_prefix, bool write_svg)
{
    ReportFiles files{path_prefix + "_cdf.csv", path_prefix + "_summary.csv", {}};

    std::ostringstream cdf;
    cdf << "run,power_dbm,cum_frac\n";
    for (const auto& c : cdfs)
        for (const auto& p : c.points)
            cdf << c.run << ',' << format_number(p.power_dbm) << ',' << format_number(p.cum_frac) << '\n';
    write_file(files.cdf_csv, cdf.str());

    std::ostringstream sum;
    sum << "metric,value\n";
    for (const auto& [metric, value] : summary)
        sum << metric << ',' << value << '\n';
    write_file(files.summary_csv, sum.str());

    if (write_svg) {
        files.cdf_svg = path_prefix + "_cdf.svg";
        write_file(files.cdf_svg, render_svg(cdfs));
    }
    return files;
}

} // namespace greencell
