#include "greencell/propagation.hpp"

#include "greencell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace greencell {

double path_loss(const PathLossModel& model, double distance_m) noexcept
{
    const double d = std::max(distance_m, kMinDistanceM);
    return model.pl0_db + 10.0 * model.exponent * std::log10(d / model.d0_m);
}

double antenna_gain(const AntennaPattern& p, double bearing_deg) noexcept
{
    if (p.kind == AntennaPattern::Kind::omni)
        return p.gain_dbi;
    const double theta = wrap_deg(bearing_deg) / p.theta_3db_deg;
    return p.gain_dbi - std::min(12.0 * theta * theta, p.front_to_back_db);
}

double shadowing_sample(std::uint64_t seed, std::string_view link_label, double sigma_db) noexcept
{
    if (sigma_db == 0.0)
        return 0.0;
    return sigma_db * standard_normal(derive_seed(seed, link_label));
}

std::string link_label(std::size_t ms_id, std::string_view location_key, LinkDirection dir)
{
    std::string label = dir == LinkDirection::uplink ? "ul|ms=" : "dl|ms=";
    label += std::to_string(ms_id);
    label += "|at=";
    label += location_key;
    return label;
}

std::vector<ReceivePoint> receive_points(const Scenario& s)
{
    std::vector<ReceivePoint> out;
    std::size_t index = 0;
    for (const auto& site : s.sites)
        for (const auto& sec : site.sectors) {
            out.push_back({ReceivePoint::Kind::sector_antenna, sec.id, site.position, sec.azimuth_deg, sec.antenna,
                           sec.noise_figure_db, "site:" + site.id, {index}});
            ++index;
        }
    for (const auto& g : s.greens) {
        ReceivePoint rp{ReceivePoint::Kind::green_antenna, g.id, g.position, g.azimuth_deg, g.antenna,
                        g.noise_figure_db, "green:" + g.id, {}};
        for (const auto& id : g.attached_sectors)
            if (auto k = s.sector_index(id))
                rp.sectors.push_back(*k);
        out.push_back(std::move(rp));
    }
    return out;
}

double deterministic_gain(const MobileStation& ms, const ReceivePoint& rp, const Scenario& s)
{
    const ClutterClass cls = s.clutter.class_at(ms.position);
    const double pl = path_loss(s.radio.pathloss[static_cast<std::size_t>(cls)], distance(rp.position, ms.position));
    const double off_boresight = bearing_deg(rp.position, ms.position) - rp.azimuth_deg;
    constexpr double kMobileAntennaDbi = 0.0;
    double penetration = 0.0;
    if (ms.indoor && ms.building)
        penetration = s.clutter.buildings.at(*ms.building).penetration_loss_db;
    return -pl + kMobileAntennaDbi + antenna_gain(rp.antenna, off_boresight) - penetration;
}

namespace {

double sigma_at(const Scenario& s, Point2 p)
{
    return s.radio.shadowing_sigma_db[static_cast<std::size_t>(s.clutter.class_at(p))];
}

} // namespace

double link_gain(const MobileStation& ms, const ReceivePoint& rp, const Scenario& s, std::uint64_t seed)
{
    return deterministic_gain(ms, rp, s) +
           shadowing_sample(seed, link_label(ms.id, rp.location_key, LinkDirection::uplink), sigma_at(s, ms.position));
}

LinkGainMatrix::LinkGainMatrix(std::size_t mobiles, std::size_t points, std::size_t sectors, std::uint64_t seed)
    : mobiles_(mobiles), points_(points), sectors_(sectors), seed_(seed), ul_(mobiles * points, 0.0),
      dl_(mobiles * sectors, 0.0)
{
}

LinkGainMatrix build_gain_matrix(const Scenario& s, const std::vector<MobileStation>& mobiles, std::uint64_t seed,
                                 unsigned jobs)
{
    const auto points = receive_points(s);
    const std::size_t nsec = s.sector_count();
    LinkGainMatrix gm(mobiles.size(), points.size(), nsec, seed);

    // Each row touches only its own entries, so rows may be filled in any order.
    const auto fill_row = [&](std::size_t i) {
        const MobileStation& ms = mobiles[i];
        const double sigma = sigma_at(s, ms.position);
        for (std::size_t r = 0; r < points.size(); ++r) {
            const double base = deterministic_gain(ms, points[r], s);
            const double ul_shadow = shadowing_sample(seed, link_label(ms.id, points[r].location_key, LinkDirection::uplink), sigma);
            gm.ul_gain_db(i, r) = base + ul_shadow;
            if (r < nsec) {
                const double dl_shadow =
                    s.radio.dl_shadowing_mode == DlShadowingMode::reciprocal
                        ? ul_shadow
                        : shadowing_sample(seed, link_label(ms.id, points[r].location_key, LinkDirection::downlink), sigma);
                gm.dl_rx_dbm(i, r) = s.sector(r).tx_power_dbm + base + dl_shadow;
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(mobiles.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < mobiles.size(); ++i)
            fill_row(i);
        return gm;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < mobiles.size(); i += workers)
                fill_row(i);
        });
    for (auto& t : pool)
        t.join();
    return gm;
}

void write_gain_matrix_csv(std::ostream& out, const LinkGainMatrix& gm, const std::vector<ReceivePoint>& points)
{
    char buf[64];
    out << "direction,ms,point,value_db\n";
    for (std::size_t i = 0; i < gm.mobile_count(); ++i) {
        for (std::size_t r = 0; r < gm.point_count(); ++r) {
            std::snprintf(buf, sizeof buf, "%.6f", gm.ul_gain_db(i, r));
            out << "ul," << i << ',' << points.at(r).id << ',' << buf << '\n';
        }
        for (std::size_t k = 0; k < gm.sector_count(); ++k) {
            std::snprintf(buf, sizeof buf, "%.6f", gm.dl_rx_dbm(i, k));
            out << "dl," << i << ',' << points.at(k).id << ',' << buf << '\n';
        }
    }
}

} // namespace greencell
