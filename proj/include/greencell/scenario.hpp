#ifndef GREENCELL_SCENARIO_HPP
#define GREENCELL_SCENARIO_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace greencell {

// ---------------------------------------------------------------------------
// Geometry. Planar, meters. Azimuths and bearings are compass degrees:
// 0 = +y (north), increasing clockwise.
// ---------------------------------------------------------------------------

struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(Point2 a, Point2 b) noexcept;

/// Compass bearing of `to` as seen from `from`, in [0, 360).
double bearing_deg(Point2 from, Point2 to) noexcept;

/// Wraps an angle difference into (-180, 180].
double wrap_deg(double deg) noexcept;

struct Rect
{
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const noexcept { return x_max - x_min; }
    double height() const noexcept { return y_max - y_min; }
    double area() const noexcept { return width() * height(); }
    bool contains(Point2 p) const noexcept
    {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    bool contains(const Rect& r) const noexcept
    {
        return r.x_min >= x_min && r.x_max <= x_max && r.y_min >= y_min && r.y_max <= y_max;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

// ---------------------------------------------------------------------------
// World description
// ---------------------------------------------------------------------------

enum class ClutterClass { open = 0, suburban = 1, urban = 2 };
inline constexpr std::size_t kClutterClassCount = 3;

std::string_view to_string(ClutterClass c) noexcept;

struct AntennaPattern
{
    enum class Kind { omni, sector };

    Kind kind = Kind::omni;
    double gain_dbi = 0.0;
    double theta_3db_deg = 65.0;
    double front_to_back_db = 20.0;

    static AntennaPattern omni(double gain_dbi) { return {Kind::omni, gain_dbi, 65.0, 20.0}; }
    static AntennaPattern sector(double gain_dbi, double theta_3db_deg = 65.0, double ftb_db = 20.0)
    {
        return {Kind::sector, gain_dbi, theta_3db_deg, ftb_db};
    }

    friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

struct Sector
{
    std::string id;
    double azimuth_deg = 0.0;
    AntennaPattern antenna = AntennaPattern::sector(15.0);
    double tx_power_dbm = 43.0; ///< DL pilot power
    double noise_figure_db = 0.0;

    friend bool operator==(const Sector&, const Sector&) = default;
};

struct Site
{
    std::string id;
    Point2 position;
    std::vector<Sector> sectors;

    friend bool operator==(const Site&, const Site&) = default;
};

/// Receive-only node. Never transmits, so it has no DL pilot.
struct GreenAntenna
{
    std::string id;
    Point2 position;
    double azimuth_deg = 0.0; ///< only meaningful for sector patterns
    AntennaPattern antenna = AntennaPattern::omni(5.0);
    std::vector<std::string> attached_sectors;
    double noise_figure_db = 0.0;

    friend bool operator==(const GreenAntenna&, const GreenAntenna&) = default;
};

struct Building
{
    std::string id;
    Rect footprint;
    double penetration_loss_db = 20.0;

    friend bool operator==(const Building&, const Building&) = default;
};

/// Raster of clutter classes plus building footprints.
/// Cell (col, row) covers [x_min + col*cell, x_min + (col+1)*cell) and the same in y,
/// row 0 being the southern-most row.
struct ClutterMap
{
    Rect bounds{-5000.0, -5000.0, 5000.0, 5000.0};
    double cell_size_m = 100.0;
    ClutterClass default_class = ClutterClass::urban;
    std::vector<std::string> grid; ///< optional rows of 'o'/'s'/'u', row 0 first
    std::vector<Building> buildings;

    std::size_t columns() const noexcept;
    std::size_t rows() const noexcept;
    ClutterClass class_at(Point2 p) const noexcept;
    /// Index of the first building containing p.
    std::optional<std::size_t> building_at(Point2 p) const noexcept;

    friend bool operator==(const ClutterMap&, const ClutterMap&) = default;
};

struct PathLossModel
{
    double pl0_db = 128.1;
    double d0_m = 1000.0;
    double exponent = 3.76;

    friend bool operator==(const PathLossModel&, const PathLossModel&) = default;
};

enum class DlShadowingMode { independent, reciprocal };

enum class Combining { mrc, selection, egc };

std::string_view to_string(Combining c) noexcept;
/// Accepts "mrc", "selection"/"sel", "egc".
std::optional<Combining> parse_combining(std::string_view s) noexcept;

/// How uplink transmissions of different mobiles share the channel.
///  shared: every other mobile interferes with full power.
///  ofdma:  mobiles of the same serving sector are orthogonal; a mobile of
///          another sector collides on a given resource with probability
///          1/K, K being the number of mobiles that sector serves.
enum class UplinkAccess { shared, ofdma };

struct RadioParams
{
    double p_min_dbm = -50.0;
    double p_max_dbm = 24.0;
    double thermal_noise_dbm = -104.0; ///< per receive branch, before noise figure
    std::array<PathLossModel, kClutterClassCount> pathloss{
        PathLossModel{128.1 - 12.0, 1000.0, 3.5},
        PathLossModel{128.1 - 6.0, 1000.0, 3.6},
        PathLossModel{128.1, 1000.0, 3.76},
    };
    std::array<double, kClutterClassCount> shadowing_sigma_db{6.0, 7.0, 8.0};
    DlShadowingMode dl_shadowing_mode = DlShadowingMode::independent;
    Combining combining = Combining::mrc;
    UplinkAccess uplink_access = UplinkAccess::ofdma;

    friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

enum class Service { voice, data };

struct TrafficParams
{
    std::int64_t mobiles_per_sector = 10;
    double indoor_fraction = 0.0;
    double voice_fraction = 0.5;
    double voice_sinr_target_db = 2.0;
    double data_sinr_target_db = 8.0;

    double target_db(Service s) const noexcept
    {
        return s == Service::voice ? voice_sinr_target_db : data_sinr_target_db;
    }

    friend bool operator==(const TrafficParams&, const TrafficParams&) = default;
};

/// Flattened (site, sector) reference.
struct SectorRef
{
    std::size_t site;
    std::size_t sector;
};

struct Scenario
{
    std::vector<Site> sites;
    std::vector<GreenAntenna> greens;
    ClutterMap clutter;
    RadioParams radio;
    TrafficParams traffic;

    /// Sectors in declaration order; a sector's index here is its sector index.
    std::vector<SectorRef> sector_refs() const;
    std::size_t sector_count() const noexcept;
    const Sector& sector(std::size_t index) const;
    Point2 sector_position(std::size_t index) const;
    std::optional<std::size_t> sector_index(std::string_view id) const;

    /// Same scenario with the greens list replaced.
    Scenario with_greens(std::vector<GreenAntenna> greens) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// True when the two scenarios are identical except for their greens lists.
bool differs_only_in_greens(const Scenario& a, const Scenario& b);

struct MobileStation
{
    std::size_t id = 0;
    Point2 position;
    bool indoor = false;
    std::optional<std::size_t> building; ///< index into clutter.buildings when indoor
    Service service = Service::voice;
    double sinr_target_db = 0.0;

    friend bool operator==(const MobileStation&, const MobileStation&) = default;
};

// ---------------------------------------------------------------------------
// Errors and validation
// ---------------------------------------------------------------------------

struct Violation
{
    std::string path;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

class ScenarioError : public std::runtime_error
{
public:
    enum class Kind { parse, validation, io };

    ScenarioError(Kind kind, std::string path, const std::string& message);

    Kind kind() const noexcept { return kind_; }
    const std::string& path() const noexcept { return path_; }

private:
    Kind kind_;
    std::string path_;
};

class DropError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Parses a JSON scenario document, fills defaults and validates it.
/// Unknown keys, type mismatches and invariant violations raise
/// ScenarioError naming the offending JSON path.
Scenario load_scenario(std::string_view config_text);
Scenario load_scenario_file(const std::string& path);

/// Every invariant violation, in a fixed order. Empty means valid.
std::vector<Violation> validate_scenario(const Scenario& s);

/// Seeded drop of mobiles_per_sector x sector_count mobiles. Pure in (s, seed).
std::vector<MobileStation> drop_mobiles(const Scenario& s, std::uint64_t seed);

} // namespace greencell

#endif
