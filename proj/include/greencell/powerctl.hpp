#ifndef GREENCELL_POWERCTL_HPP
#define GREENCELL_POWERCTL_HPP

#include "greencell/propagation.hpp"
#include "greencell/scenario.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace greencell {

/// Serving sector per mobile: the sector with the strongest DL pilot,
/// ties going to the lowest sector index. Green antennas have no pilot and
/// cannot influence the choice.
struct Association
{
    std::vector<std::size_t> serving;
    std::vector<double> serving_dl_dbm;
};

Association associate(const LinkGainMatrix& gm);

/// Receive points (indices into receive_points()) combined for each sector:
/// the sector's own antenna first, then attached greens in declaration order.
struct BranchSet
{
    std::vector<std::vector<std::size_t>> per_sector;
};

BranchSet receive_branches(const Scenario& s);

struct PowerLimits
{
    double p_min_dbm = -50.0;
    double p_max_dbm = 24.0;
};

/// Uplink power-control instance in the linear domain.
///
/// The interference seen by mobile i at receive point r is
///     I_ir = sum_{j != i} c_ij * p_j * g_jr
/// with c_ij = intra_group_weight when i and j share a group (serving sector)
/// and c_ij = inter_weight[j] otherwise. Plain full-power interference is
/// every weight equal to one.
struct UplinkProblem
{
    std::size_t mobiles = 0;
    std::size_t points = 0;
    std::vector<double> gain;     ///< mobiles x points, linear
    std::vector<double> noise_mw; ///< per receive point
    std::vector<std::vector<std::size_t>> branches; ///< per mobile
    std::vector<double> target;   ///< per mobile, linear SINR
    std::vector<std::size_t> group;
    std::vector<double> inter_weight;
    double intra_group_weight = 1.0;
    Combining combining = Combining::mrc;
    PowerLimits limits;

    double g(std::size_t ms, std::size_t rp) const { return gain[ms * points + rp]; }

    /// Problem where every mobile interferes with every other at full power.
    /// `gain` is row-major mobiles x points.
    static UplinkProblem full_interference(std::size_t mobiles, std::size_t points, std::vector<double> gain,
                                           std::vector<double> noise_mw, std::vector<std::vector<std::size_t>> branches,
                                           std::vector<double> target, Combining combining, PowerLimits limits);
};

/// Linear problem for one snapshot of a scenario.
UplinkProblem make_problem(const Scenario& s, const std::vector<MobileStation>& mobiles, const LinkGainMatrix& gm,
                           const Association& assoc, const BranchSet& branches, Combining combining);

/// Combined SINR per unit transmit power of mobile i: SINR_i(p) = p_i * sinr_per_mw(i).
/// Evaluated with the interference produced by `powers_mw`.
class InterferenceField
{
public:
    InterferenceField(const UplinkProblem& problem, const std::vector<double>& powers_mw);

    /// I_ir for a branch of mobile i.
    double interference(std::size_t ms, std::size_t rp) const;
    double sinr_per_mw(std::size_t ms) const;

private:
    const UplinkProblem& problem_;
    const std::vector<double>& powers_;
    std::size_t groups_ = 0;
    std::vector<double> weighted_by_group_; ///< groups x points
    std::vector<std::vector<std::size_t>> members_;
};

/// Effective (combined) SINR of one mobile in dB.
double effective_sinr(const UplinkProblem& problem, const std::vector<double>& powers_mw, std::size_t ms);

/// Unclamped update map T_i(p) = gamma_i * p_i / SINR_i(p).
std::vector<double> interference_function(const UplinkProblem& problem, const std::vector<double>& powers_mw);

/// One Jacobi step of the multiplicative closed-loop update, clamped to the limits.
std::vector<double> power_control_step(const UplinkProblem& problem, const std::vector<double>& powers_mw);

struct SolverOptions
{
    double tolerance_db = 0.01;
    std::size_t max_iterations = 1000;
    /// Keep iterating at least this long even if the tolerance is met.
    std::size_t min_iterations = 0;
    double outage_margin_db = 0.5;
};

struct PowerControlResult
{
    std::vector<double> tx_power_dbm;
    std::vector<double> sinr_db;
    std::vector<bool> outage;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Iterates power_control_step from all-p_min until the largest per-mobile
/// change drops below the tolerance or the iteration cap is hit. A step only
/// counts as converged when the extrapolated remaining drift (from the ratio
/// of successive changes) is also below the tolerance.
PowerControlResult solve_power_control(const UplinkProblem& problem, const SolverOptions& options = {});

PowerControlResult solve_power_control(const Scenario& s, const std::vector<MobileStation>& mobiles,
                                       const LinkGainMatrix& gm, const Association& assoc, Combining combining,
                                       const SolverOptions& options = {});

inline double db_to_linear(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double lin) noexcept
{
    return 10.0 * std::log10(lin);
}

} // namespace greencell

#endif
