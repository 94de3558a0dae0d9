#ifndef GREENCELL_PROPAGATION_HPP
#define GREENCELL_PROPAGATION_HPP

#include "greencell/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace greencell {

/// Distances below this are evaluated at the clamp.
inline constexpr double kMinDistanceM = 10.0;

/// Log-distance path loss in dB.
double path_loss(const PathLossModel& model, double distance_m) noexcept;

/// Antenna gain in dBi at `bearing_deg` off boresight.
/// Sector patterns use the parabolic 12 (theta/theta_3dB)^2 roll-off capped at the front-to-back ratio.
double antenna_gain(const AntennaPattern& p, double bearing_deg) noexcept;

/// Zero-mean lognormal shadowing in dB, determined by (seed, link_label).
double shadowing_sample(std::uint64_t seed, std::string_view link_label, double sigma_db) noexcept;

enum class LinkDirection { uplink, downlink };

/// Label of the shadowing stream of one link. Built from ids, never from indices.
/// `location_key` names the receive location: co-located sector antennas of a
/// site share one propagation path and therefore one draw.
std::string link_label(std::size_t ms_id, std::string_view location_key, LinkDirection dir);

struct ReceivePoint
{
    enum class Kind { sector_antenna, green_antenna };

    Kind kind = Kind::sector_antenna;
    std::string id;
    Point2 position;
    double azimuth_deg = 0.0;
    AntennaPattern antenna;
    double noise_figure_db = 0.0;
    std::string location_key; ///< "site:<id>" or "green:<id>"
    /// Owning sector index for sector antennas; attached sector indices for greens.
    std::vector<std::size_t> sectors;
};

/// Sector antennas in sector order, followed by green antennas in declaration order.
/// Index k < sector_count() is the antenna of sector k.
std::vector<ReceivePoint> receive_points(const Scenario& s);

/// Channel gain of a link excluding shadowing (dB).
double deterministic_gain(const MobileStation& ms, const ReceivePoint& rp, const Scenario& s);

/// Uplink channel gain MS -> receive point, in dB.
double link_gain(const MobileStation& ms, const ReceivePoint& rp, const Scenario& s, std::uint64_t seed);

/// Per-snapshot channel tables.
class LinkGainMatrix
{
public:
    LinkGainMatrix() = default;
    LinkGainMatrix(std::size_t mobiles, std::size_t points, std::size_t sectors, std::uint64_t seed);

    std::size_t mobile_count() const noexcept { return mobiles_; }
    std::size_t point_count() const noexcept { return points_; }
    std::size_t sector_count() const noexcept { return sectors_; }
    std::uint64_t seed() const noexcept { return seed_; }

    double ul_gain_db(std::size_t ms, std::size_t rp) const { return ul_[ms * points_ + rp]; }
    double& ul_gain_db(std::size_t ms, std::size_t rp) { return ul_[ms * points_ + rp]; }
    double dl_rx_dbm(std::size_t ms, std::size_t sector) const { return dl_[ms * sectors_ + sector]; }
    double& dl_rx_dbm(std::size_t ms, std::size_t sector) { return dl_[ms * sectors_ + sector]; }

    const std::vector<double>& ul_table() const noexcept { return ul_; }
    const std::vector<double>& dl_table() const noexcept { return dl_; }

private:
    std::size_t mobiles_ = 0;
    std::size_t points_ = 0;
    std::size_t sectors_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> ul_;
    std::vector<double> dl_;
};

/// Fills the UL table over every receive point and the DL pilot table over sectors.
/// `jobs` > 1 fills mobiles in parallel; the result does not depend on it.
LinkGainMatrix build_gain_matrix(const Scenario& s, const std::vector<MobileStation>& mobiles, std::uint64_t seed,
                                 unsigned jobs = 1);

/// CSV dump (direction,ms,point,value_db) for debugging.
void write_gain_matrix_csv(std::ostream& out, const LinkGainMatrix& gm, const std::vector<ReceivePoint>& points);

} // namespace greencell

#endif
