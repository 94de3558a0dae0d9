#include "greencell/scenario.hpp"

#include "greencell/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

namespace greencell {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

double distance(Point2 a, Point2 b) noexcept
{
    return std::hypot(b.x - a.x, b.y - a.y);
}

double bearing_deg(Point2 from, Point2 to) noexcept
{
    double deg = std::atan2(to.x - from.x, to.y - from.y) * 180.0 / std::numbers::pi;
    if (deg < 0.0)
        deg += 360.0;
    return deg >= 360.0 ? 0.0 : deg;
}

double wrap_deg(double deg) noexcept
{
    deg = std::fmod(deg, 360.0);
    if (deg > 180.0)
        deg -= 360.0;
    else if (deg <= -180.0)
        deg += 360.0;
    return deg;
}

std::string_view to_string(ClutterClass c) noexcept
{
    switch (c) {
    case ClutterClass::open: return "open";
    case ClutterClass::suburban: return "suburban";
    case ClutterClass::urban: return "urban";
    }
    return "urban";
}

std::string_view to_string(Combining c) noexcept
{
    switch (c) {
    case Combining::mrc: return "mrc";
    case Combining::selection: return "selection";
    case Combining::egc: return "egc";
    }
    return "mrc";
}

std::optional<Combining> parse_combining(std::string_view s) noexcept
{
    if (s == "mrc")
        return Combining::mrc;
    if (s == "selection" || s == "sel")
        return Combining::selection;
    if (s == "egc")
        return Combining::egc;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// ClutterMap / Scenario helpers
// ---------------------------------------------------------------------------

std::size_t ClutterMap::columns() const noexcept
{
    if (!(cell_size_m > 0.0) || !(bounds.width() > 0.0))
        return 0;
    return static_cast<std::size_t>(std::ceil(bounds.width() / cell_size_m));
}

std::size_t ClutterMap::rows() const noexcept
{
    if (!(cell_size_m > 0.0) || !(bounds.height() > 0.0))
        return 0;
    return static_cast<std::size_t>(std::ceil(bounds.height() / cell_size_m));
}

static std::optional<ClutterClass> class_from_char(char c) noexcept
{
    switch (c) {
    case 'o': return ClutterClass::open;
    case 's': return ClutterClass::suburban;
    case 'u': return ClutterClass::urban;
    default: return std::nullopt;
    }
}

ClutterClass ClutterMap::class_at(Point2 p) const noexcept
{
    if (grid.empty() || !(cell_size_m > 0.0))
        return default_class;
    const auto clamp_index = [](double v, std::size_t n) -> std::size_t {
        if (!(v > 0.0))
            return 0;
        return std::min(static_cast<std::size_t>(v), n - 1);
    };
    const std::size_t nrows = grid.size();
    const std::size_t row = clamp_index((p.y - bounds.y_min) / cell_size_m, nrows);
    const std::string& line = grid[row];
    if (line.empty())
        return default_class;
    const std::size_t col = clamp_index((p.x - bounds.x_min) / cell_size_m, line.size());
    return class_from_char(line[col]).value_or(default_class);
}

std::optional<std::size_t> ClutterMap::building_at(Point2 p) const noexcept
{
    for (std::size_t b = 0; b < buildings.size(); ++b)
        if (buildings[b].footprint.contains(p))
            return b;
    return std::nullopt;
}

std::vector<SectorRef> Scenario::sector_refs() const
{
    std::vector<SectorRef> refs;
    for (std::size_t i = 0; i < sites.size(); ++i)
        for (std::size_t k = 0; k < sites[i].sectors.size(); ++k)
            refs.push_back({i, k});
    return refs;
}

std::size_t Scenario::sector_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& site : sites)
        n += site.sectors.size();
    return n;
}

const Sector& Scenario::sector(std::size_t index) const
{
    for (const auto& site : sites) {
        if (index < site.sectors.size())
            return site.sectors[index];
        index -= site.sectors.size();
    }
    throw std::out_of_range("sector index out of range");
}

Point2 Scenario::sector_position(std::size_t index) const
{
    for (const auto& site : sites) {
        if (index < site.sectors.size())
            return site.position;
        index -= site.sectors.size();
    }
    throw std::out_of_range("sector index out of range");
}

std::optional<std::size_t> Scenario::sector_index(std::string_view id) const
{
    std::size_t index = 0;
    for (const auto& site : sites)
        for (const auto& sec : site.sectors) {
            if (sec.id == id)
                return index;
            ++index;
        }
    return std::nullopt;
}

Scenario Scenario::with_greens(std::vector<GreenAntenna> g) const
{
    Scenario copy = *this;
    copy.greens = std::move(g);
    return copy;
}

bool differs_only_in_greens(const Scenario& a, const Scenario& b)
{
    return a.sites == b.sites && a.clutter == b.clutter && a.radio == b.radio && a.traffic == b.traffic;
}

ScenarioError::ScenarioError(Kind kind, std::string path, const std::string& message)
    : std::runtime_error(path.empty() ? message : path + ": " + message), kind_(kind), path_(std::move(path))
{
}

// ---------------------------------------------------------------------------
// JSON reading
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message)
{
    throw ScenarioError(ScenarioError::Kind::validation, path.empty() ? "/" : path, message);
}

std::string join(const std::string& path, std::string_view key)
{
    return path + "/" + std::string(key);
}

std::string join(const std::string& path, std::size_t index)
{
    return path + "/" + std::to_string(index);
}

const json& require_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed)
{
    if (!j.is_object())
        schema_error(path, "expected an object");
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            schema_error(join(path, item.key()), "unknown key");
    }
    return j;
}

const json* find(const json& obj, std::string_view key)
{
    auto it = obj.find(std::string(key));
    return it == obj.end() ? nullptr : &*it;
}

double read_number(const json& obj, const std::string& path, std::string_view key, double fallback)
{
    const json* v = find(obj, key);
    if (!v)
        return fallback;
    if (!v->is_number())
        schema_error(join(path, key), "expected a number");
    return v->get<double>();
}

double require_number(const json& obj, const std::string& path, std::string_view key)
{
    const json* v = find(obj, key);
    if (!v)
        schema_error(join(path, key), "missing required key");
    if (!v->is_number())
        schema_error(join(path, key), "expected a number");
    return v->get<double>();
}

std::int64_t read_integer(const json& obj, const std::string& path, std::string_view key, std::int64_t fallback)
{
    const json* v = find(obj, key);
    if (!v)
        return fallback;
    if (!v->is_number_integer())
        schema_error(join(path, key), "expected an integer");
    return v->get<std::int64_t>();
}

std::string read_string(const json& obj, const std::string& path, std::string_view key, std::string fallback)
{
    const json* v = find(obj, key);
    if (!v)
        return fallback;
    if (!v->is_string())
        schema_error(join(path, key), "expected a string");
    return v->get<std::string>();
}

Point2 read_point(const json& obj, const std::string& path, std::string_view key)
{
    const json* v = find(obj, key);
    const std::string p = join(path, key);
    if (!v)
        schema_error(p, "missing required key");
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
        schema_error(p, "expected [x, y]");
    return {(*v)[0].get<double>(), (*v)[1].get<double>()};
}

const json& read_array(const json& obj, const std::string& path, std::string_view key)
{
    static const json empty = json::array();
    const json* v = find(obj, key);
    if (!v)
        return empty;
    if (!v->is_array())
        schema_error(join(path, key), "expected an array");
    return *v;
}

Rect read_rect(const json& j, const std::string& path)
{
    require_object(j, path, {"x_min", "y_min", "x_max", "y_max"});
    return {require_number(j, path, "x_min"), require_number(j, path, "y_min"), require_number(j, path, "x_max"),
            require_number(j, path, "y_max")};
}

AntennaPattern read_antenna(const json& obj, const std::string& path, AntennaPattern fallback)
{
    const json* v = find(obj, "antenna");
    if (!v)
        return fallback;
    const std::string p = join(path, "antenna");
    require_object(*v, p, {"kind", "gain_dbi", "theta_3db_deg", "front_to_back_db"});
    AntennaPattern a = fallback;
    const std::string kind = read_string(*v, p, "kind", a.kind == AntennaPattern::Kind::omni ? "omni" : "sector");
    if (kind == "omni")
        a.kind = AntennaPattern::Kind::omni;
    else if (kind == "sector")
        a.kind = AntennaPattern::Kind::sector;
    else
        schema_error(join(p, "kind"), "expected \"omni\" or \"sector\", got \"" + kind + "\"");
    a.gain_dbi = read_number(*v, p, "gain_dbi", a.gain_dbi);
    a.theta_3db_deg = read_number(*v, p, "theta_3db_deg", a.theta_3db_deg);
    a.front_to_back_db = read_number(*v, p, "front_to_back_db", a.front_to_back_db);
    return a;
}

std::optional<ClutterClass> class_from_name(std::string_view name)
{
    if (name == "open")
        return ClutterClass::open;
    if (name == "suburban")
        return ClutterClass::suburban;
    if (name == "urban")
        return ClutterClass::urban;
    return std::nullopt;
}

Site read_site(const json& j, const std::string& path, std::size_t index)
{
    require_object(j, path, {"id", "position", "sectors"});
    Site site;
    site.id = read_string(j, path, "id", "site" + std::to_string(index));
    site.position = read_point(j, path, "position");
    const json& sectors = read_array(j, path, "sectors");
    const std::string spath = join(path, "sectors");
    for (std::size_t k = 0; k < sectors.size(); ++k) {
        const std::string p = join(spath, k);
        const json& sj = require_object(sectors[k], p, {"id", "azimuth_deg", "antenna", "tx_power_dbm", "noise_figure_db"});
        Sector sec;
        sec.id = read_string(sj, p, "id", site.id + "/" + std::to_string(k));
        sec.azimuth_deg = read_number(sj, p, "azimuth_deg", sec.azimuth_deg);
        sec.antenna = read_antenna(sj, p, sec.antenna);
        sec.tx_power_dbm = read_number(sj, p, "tx_power_dbm", sec.tx_power_dbm);
        sec.noise_figure_db = read_number(sj, p, "noise_figure_db", sec.noise_figure_db);
        site.sectors.push_back(std::move(sec));
    }
    if (!find(j, "sectors")) {
        // A site without a sector list gets one omni sector.
        Sector sec;
        sec.id = site.id + "/0";
        sec.antenna = AntennaPattern::omni(10.0);
        site.sectors.push_back(std::move(sec));
    }
    return site;
}

GreenAntenna read_green(const json& j, const std::string& path, std::size_t index)
{
    require_object(j, path, {"id", "position", "azimuth_deg", "antenna", "attached_sectors", "noise_figure_db"});
    GreenAntenna g;
    g.id = read_string(j, path, "id", "green" + std::to_string(index));
    g.position = read_point(j, path, "position");
    g.azimuth_deg = read_number(j, path, "azimuth_deg", g.azimuth_deg);
    g.antenna = read_antenna(j, path, g.antenna);
    g.noise_figure_db = read_number(j, path, "noise_figure_db", g.noise_figure_db);
    const json& att = read_array(j, path, "attached_sectors");
    for (std::size_t k = 0; k < att.size(); ++k) {
        if (!att[k].is_string())
            schema_error(join(join(path, "attached_sectors"), k), "expected a sector id string");
        g.attached_sectors.push_back(att[k].get<std::string>());
    }
    return g;
}

ClutterMap read_clutter(const json& root)
{
    ClutterMap c;
    const json* v = find(root, "clutter");
    if (!v)
        return c;
    const std::string path = "/clutter";
    require_object(*v, path, {"bounds", "cell_size_m", "default_class", "grid", "buildings"});
    if (const json* b = find(*v, "bounds"))
        c.bounds = read_rect(*b, join(path, "bounds"));
    c.cell_size_m = read_number(*v, path, "cell_size_m", c.cell_size_m);
    const std::string def = read_string(*v, path, "default_class", std::string(to_string(c.default_class)));
    if (auto cls = class_from_name(def))
        c.default_class = *cls;
    else
        schema_error(join(path, "default_class"), "unknown clutter class \"" + def + "\"");
    const json& grid = read_array(*v, path, "grid");
    for (std::size_t r = 0; r < grid.size(); ++r) {
        if (!grid[r].is_string())
            schema_error(join(join(path, "grid"), r), "expected a string of o/s/u");
        c.grid.push_back(grid[r].get<std::string>());
    }
    const json& buildings = read_array(*v, path, "buildings");
    for (std::size_t k = 0; k < buildings.size(); ++k) {
        const std::string p = join(join(path, "buildings"), k);
        require_object(buildings[k], p, {"id", "footprint", "penetration_loss_db"});
        Building b;
        b.id = read_string(buildings[k], p, "id", "bldg" + std::to_string(k));
        const json* fp = find(buildings[k], "footprint");
        if (!fp)
            schema_error(join(p, "footprint"), "missing required key");
        b.footprint = read_rect(*fp, join(p, "footprint"));
        b.penetration_loss_db = read_number(buildings[k], p, "penetration_loss_db", b.penetration_loss_db);
        c.buildings.push_back(std::move(b));
    }
    return c;
}

template <typename T, typename Fn>
void read_per_class(const json& obj, const std::string& path, std::string_view key,
                    std::array<T, kClutterClassCount>& out, Fn&& read_one)
{
    const json* v = find(obj, key);
    if (!v)
        return;
    const std::string p = join(path, key);
    require_object(*v, p, {"open", "suburban", "urban"});
    for (const auto& item : v->items()) {
        const auto cls = class_from_name(item.key());
        read_one(item.value(), join(p, item.key()), out[static_cast<std::size_t>(*cls)]);
    }
}

RadioParams read_radio(const json& root)
{
    RadioParams r;
    const json* v = find(root, "radio");
    if (!v)
        return r;
    const std::string path = "/radio";
    require_object(*v, path,
                   {"p_min_dbm", "p_max_dbm", "thermal_noise_dbm", "pathloss", "shadowing_sigma_db",
                    "dl_shadowing_mode", "combining", "uplink_access"});
    r.p_min_dbm = read_number(*v, path, "p_min_dbm", r.p_min_dbm);
    r.p_max_dbm = read_number(*v, path, "p_max_dbm", r.p_max_dbm);
    r.thermal_noise_dbm = read_number(*v, path, "thermal_noise_dbm", r.thermal_noise_dbm);
    read_per_class(*v, path, "pathloss", r.pathloss, [](const json& j, const std::string& p, PathLossModel& m) {
        require_object(j, p, {"pl0_db", "d0_m", "exponent"});
        m.pl0_db = read_number(j, p, "pl0_db", m.pl0_db);
        m.d0_m = read_number(j, p, "d0_m", m.d0_m);
        m.exponent = read_number(j, p, "exponent", m.exponent);
    });
    read_per_class(*v, path, "shadowing_sigma_db", r.shadowing_sigma_db,
                   [](const json& j, const std::string& p, double& sigma) {
                       if (!j.is_number())
                           schema_error(p, "expected a number");
                       sigma = j.get<double>();
                   });
    const std::string mode = read_string(*v, path, "dl_shadowing_mode", "independent");
    if (mode == "independent")
        r.dl_shadowing_mode = DlShadowingMode::independent;
    else if (mode == "reciprocal")
        r.dl_shadowing_mode = DlShadowingMode::reciprocal;
    else
        schema_error(join(path, "dl_shadowing_mode"), "expected \"independent\" or \"reciprocal\", got \"" + mode + "\"");
    const std::string comb = read_string(*v, path, "combining", "mrc");
    if (auto c = parse_combining(comb))
        r.combining = *c;
    else
        schema_error(join(path, "combining"), "expected \"mrc\", \"selection\" or \"egc\", got \"" + comb + "\"");
    const std::string access = read_string(*v, path, "uplink_access", "ofdma");
    if (access == "ofdma")
        r.uplink_access = UplinkAccess::ofdma;
    else if (access == "shared")
        r.uplink_access = UplinkAccess::shared;
    else
        schema_error(join(path, "uplink_access"), "expected \"ofdma\" or \"shared\", got \"" + access + "\"");
    return r;
}

TrafficParams read_traffic(const json& root)
{
    TrafficParams t;
    const json* v = find(root, "traffic");
    if (!v)
        return t;
    const std::string path = "/traffic";
    require_object(*v, path, {"mobiles_per_sector", "indoor_fraction", "voice_fraction", "sinr_target_db"});
    t.mobiles_per_sector = read_integer(*v, path, "mobiles_per_sector", t.mobiles_per_sector);
    t.indoor_fraction = read_number(*v, path, "indoor_fraction", t.indoor_fraction);
    t.voice_fraction = read_number(*v, path, "voice_fraction", t.voice_fraction);
    if (const json* tg = find(*v, "sinr_target_db")) {
        const std::string p = join(path, "sinr_target_db");
        require_object(*tg, p, {"voice", "data"});
        t.voice_sinr_target_db = read_number(*tg, p, "voice", t.voice_sinr_target_db);
        t.data_sinr_target_db = read_number(*tg, p, "data", t.data_sinr_target_db);
    }
    return t;
}

} // namespace

Scenario load_scenario(std::string_view config_text)
{
    json root;
    try {
        root = json::parse(config_text.begin(), config_text.end());
    } catch (const json::parse_error& e) {
        throw ScenarioError(ScenarioError::Kind::parse, "", std::string("malformed scenario document: ") + e.what());
    }
    require_object(root, "", {"sites", "greens", "clutter", "radio", "traffic"});
    if (!find(root, "sites"))
        schema_error("/sites", "missing required key");

    Scenario s;
    const json& sites = read_array(root, "", "sites");
    for (std::size_t i = 0; i < sites.size(); ++i)
        s.sites.push_back(read_site(sites[i], join(std::string("/sites"), i), i));
    const json& greens = read_array(root, "", "greens");
    for (std::size_t i = 0; i < greens.size(); ++i)
        s.greens.push_back(read_green(greens[i], join(std::string("/greens"), i), i));
    s.clutter = read_clutter(root);
    s.radio = read_radio(root);
    s.traffic = read_traffic(root);

    const auto violations = validate_scenario(s);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << violations.front().message;
        if (violations.size() > 1)
            msg << " (and " << violations.size() - 1 << " more violation(s))";
        throw ScenarioError(ScenarioError::Kind::validation, violations.front().path, msg.str());
    }
    return s;
}

Scenario load_scenario_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ScenarioError(ScenarioError::Kind::io, path, "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_scenario(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(e.kind(), path + (e.path().empty() ? "" : ":" + e.path()),
                            e.path().empty() ? e.what() : std::string(e.what()).substr(e.path().size() + 2));
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

class Checker
{
public:
    void check(bool ok, std::string path, std::string message)
    {
        if (!ok)
            out_.push_back({std::move(path), std::move(message)});
    }
    std::vector<Violation> take() { return std::move(out_); }

private:
    std::vector<Violation> out_;
};

bool finite(double v) { return std::isfinite(v); }

void check_antenna(Checker& c, const AntennaPattern& a, const std::string& path)
{
    c.check(finite(a.gain_dbi), path + "/gain_dbi", "antenna gain must be finite");
    if (a.kind == AntennaPattern::Kind::sector) {
        c.check(a.theta_3db_deg > 0.0 && finite(a.theta_3db_deg), path + "/theta_3db_deg",
                "3 dB beamwidth must be positive");
        c.check(a.front_to_back_db >= 0.0 && finite(a.front_to_back_db), path + "/front_to_back_db",
                "front-to-back ratio must be >= 0");
    }
}

void check_azimuth(Checker& c, double az, const std::string& path)
{
    c.check(az >= 0.0 && az < 360.0, path, "azimuth must lie in [0, 360)");
}

} // namespace

std::vector<Violation> validate_scenario(const Scenario& s)
{
    Checker c;
    const Rect& bounds = s.clutter.bounds;

    c.check(s.sector_count() > 0, "/sites", "scenario has no sectors");
    std::set<std::string> sector_ids;
    std::set<std::string> site_ids;
    for (std::size_t i = 0; i < s.sites.size(); ++i) {
        const Site& site = s.sites[i];
        const std::string p = "/sites/" + std::to_string(i);
        c.check(site_ids.insert(site.id).second, p + "/id", "duplicate site id \"" + site.id + "\"");
        c.check(bounds.contains(site.position), p + "/position", "site \"" + site.id + "\" lies outside the clutter bounds");
        for (std::size_t k = 0; k < site.sectors.size(); ++k) {
            const Sector& sec = site.sectors[k];
            const std::string sp = p + "/sectors/" + std::to_string(k);
            c.check(!sec.id.empty(), sp + "/id", "sector id must be non-empty");
            c.check(sector_ids.insert(sec.id).second, sp + "/id", "duplicate sector id \"" + sec.id + "\"");
            check_azimuth(c, sec.azimuth_deg, sp + "/azimuth_deg");
            check_antenna(c, sec.antenna, sp + "/antenna");
            c.check(finite(sec.tx_power_dbm), sp + "/tx_power_dbm", "pilot power must be finite");
            c.check(finite(sec.noise_figure_db), sp + "/noise_figure_db", "noise figure must be finite");
        }
    }

    std::set<std::string> green_ids;
    for (std::size_t i = 0; i < s.greens.size(); ++i) {
        const GreenAntenna& g = s.greens[i];
        const std::string p = "/greens/" + std::to_string(i);
        c.check(green_ids.insert(g.id).second && !sector_ids.contains(g.id), p + "/id",
                "receive point id \"" + g.id + "\" is not unique");
        c.check(bounds.contains(g.position), p + "/position", "green antenna \"" + g.id + "\" lies outside the clutter bounds");
        check_azimuth(c, g.azimuth_deg, p + "/azimuth_deg");
        check_antenna(c, g.antenna, p + "/antenna");
        c.check(finite(g.noise_figure_db), p + "/noise_figure_db", "noise figure must be finite");
        c.check(!g.attached_sectors.empty(), p + "/attached_sectors",
                "green antenna \"" + g.id + "\" is not attached to any sector");
        for (std::size_t k = 0; k < g.attached_sectors.size(); ++k) {
            const std::string& id = g.attached_sectors[k];
            c.check(sector_ids.contains(id), p + "/attached_sectors/" + std::to_string(k),
                    "green antenna \"" + g.id + "\" references unknown sector \"" + id + "\"");
        }
    }

    const ClutterMap& cl = s.clutter;
    c.check(bounds.x_max > bounds.x_min && bounds.y_max > bounds.y_min, "/clutter/bounds", "bounds must have positive area");
    c.check(cl.cell_size_m > 0.0 && finite(cl.cell_size_m), "/clutter/cell_size_m", "cell size must be positive");
    if (!cl.grid.empty()) {
        c.check(cl.grid.size() == cl.rows(), "/clutter/grid",
                "grid has " + std::to_string(cl.grid.size()) + " rows, expected " + std::to_string(cl.rows()));
        for (std::size_t r = 0; r < cl.grid.size(); ++r) {
            const std::string& line = cl.grid[r];
            const std::string p = "/clutter/grid/" + std::to_string(r);
            c.check(line.size() == cl.columns(), p,
                    "grid row has " + std::to_string(line.size()) + " cells, expected " + std::to_string(cl.columns()));
            c.check(std::all_of(line.begin(), line.end(), [](char ch) { return class_from_char(ch).has_value(); }), p,
                    "grid cells must be one of o, s, u");
        }
    }
    std::set<std::string> building_ids;
    for (std::size_t i = 0; i < cl.buildings.size(); ++i) {
        const Building& b = cl.buildings[i];
        const std::string p = "/clutter/buildings/" + std::to_string(i);
        c.check(building_ids.insert(b.id).second, p + "/id", "duplicate building id \"" + b.id + "\"");
        c.check(b.footprint.x_max > b.footprint.x_min && b.footprint.y_max > b.footprint.y_min, p + "/footprint",
                "building \"" + b.id + "\" footprint must have positive area");
        c.check(bounds.contains(b.footprint), p + "/footprint", "building \"" + b.id + "\" lies outside the clutter bounds");
        c.check(b.penetration_loss_db >= 0.0 && finite(b.penetration_loss_db), p + "/penetration_loss_db",
                "building \"" + b.id + "\" penetration loss must be >= 0");
    }

    const RadioParams& r = s.radio;
    c.check(finite(r.p_min_dbm) && finite(r.p_max_dbm) && r.p_min_dbm < r.p_max_dbm, "/radio/p_min_dbm",
            "p_min_dbm must be below p_max_dbm");
    c.check(r.p_max_dbm - r.p_min_dbm >= 60.0, "/radio/p_max_dbm", "transmit power dynamic range must be at least 60 dB");
    c.check(finite(r.thermal_noise_dbm), "/radio/thermal_noise_dbm", "thermal noise must be finite");
    for (std::size_t k = 0; k < kClutterClassCount; ++k) {
        const std::string name(to_string(static_cast<ClutterClass>(k)));
        const PathLossModel& m = r.pathloss[k];
        const std::string p = "/radio/pathloss/" + name;
        c.check(finite(m.pl0_db), p + "/pl0_db", "reference loss must be finite");
        c.check(m.d0_m > 0.0 && finite(m.d0_m), p + "/d0_m", "reference distance must be positive");
        c.check(m.exponent > 0.0 && finite(m.exponent), p + "/exponent", "path loss exponent must be positive");
        c.check(r.shadowing_sigma_db[k] >= 0.0 && finite(r.shadowing_sigma_db[k]), "/radio/shadowing_sigma_db/" + name,
                "shadowing sigma must be >= 0");
    }

    const TrafficParams& t = s.traffic;
    c.check(t.mobiles_per_sector >= 0, "/traffic/mobiles_per_sector", "mobile count must be >= 0");
    c.check(t.indoor_fraction >= 0.0 && t.indoor_fraction <= 1.0, "/traffic/indoor_fraction",
            "indoor fraction must lie in [0, 1]");
    c.check(t.voice_fraction >= 0.0 && t.voice_fraction <= 1.0, "/traffic/voice_fraction",
            "voice fraction must lie in [0, 1]");
    c.check(finite(t.voice_sinr_target_db), "/traffic/sinr_target_db/voice", "SINR target must be finite");
    c.check(finite(t.data_sinr_target_db), "/traffic/sinr_target_db/data", "SINR target must be finite");

    return c.take();
}

// ---------------------------------------------------------------------------
// Drops
// ---------------------------------------------------------------------------

std::vector<MobileStation> drop_mobiles(const Scenario& s, std::uint64_t seed)
{
    const TrafficParams& t = s.traffic;
    const auto& buildings = s.clutter.buildings;
    const Rect& bounds = s.clutter.bounds;
    if (t.indoor_fraction > 0.0 && buildings.empty())
        throw DropError("infeasible drop: indoor_fraction > 0 but the scenario has no buildings");

    std::vector<double> cumulative_area;
    double total = 0.0;
    for (const auto& b : buildings) {
        total += b.footprint.area();
        cumulative_area.push_back(total);
    }

    const std::size_t count = static_cast<std::size_t>(std::max<std::int64_t>(t.mobiles_per_sector, 0)) * s.sector_count();
    std::vector<MobileStation> out;
    out.reserve(count);
    Stream rng(derive_seed(seed, "drop"));

    constexpr int kMaxOutdoorAttempts = 100000;
    for (std::size_t i = 0; i < count; ++i) {
        MobileStation ms;
        ms.id = i;
        ms.indoor = rng.bernoulli(t.indoor_fraction);
        ms.service = rng.bernoulli(t.voice_fraction) ? Service::voice : Service::data;
        ms.sinr_target_db = t.target_db(ms.service);
        if (ms.indoor) {
            const double pick = rng.uniform() * total;
            const std::size_t b = std::min<std::size_t>(
                std::upper_bound(cumulative_area.begin(), cumulative_area.end(), pick) - cumulative_area.begin(),
                buildings.size() - 1);
            const Rect& fp = buildings[b].footprint;
            ms.position = {rng.uniform(fp.x_min, fp.x_max), rng.uniform(fp.y_min, fp.y_max)};
            ms.building = b;
        } else {
            int attempts = 0;
            do {
                if (++attempts > kMaxOutdoorAttempts)
                    throw DropError("infeasible drop: no outdoor area left outside building footprints");
                ms.position = {rng.uniform(bounds.x_min, bounds.x_max), rng.uniform(bounds.y_min, bounds.y_max)};
            } while (s.clutter.building_at(ms.position).has_value());
        }
        out.push_back(ms);
    }
    return out;
}

} // namespace greencell
