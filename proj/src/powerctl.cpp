#include "greencell/powerctl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace greencell {

Association associate(const LinkGainMatrix& gm)
{
    Association a;
    a.serving.resize(gm.mobile_count());
    a.serving_dl_dbm.resize(gm.mobile_count());
    for (std::size_t i = 0; i < gm.mobile_count(); ++i) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < gm.sector_count(); ++k)
            if (gm.dl_rx_dbm(i, k) > gm.dl_rx_dbm(i, best))
                best = k;
        a.serving[i] = best;
        a.serving_dl_dbm[i] = gm.sector_count() ? gm.dl_rx_dbm(i, best) : -INFINITY;
    }
    return a;
}

BranchSet receive_branches(const Scenario& s)
{
    const std::size_t nsec = s.sector_count();
    BranchSet b;
    b.per_sector.resize(nsec);
    for (std::size_t k = 0; k < nsec; ++k)
        b.per_sector[k].push_back(k);
    for (std::size_t g = 0; g < s.greens.size(); ++g)
        for (const auto& id : s.greens[g].attached_sectors) {
            const auto k = s.sector_index(id);
            if (!k)
                throw std::invalid_argument("green antenna \"" + s.greens[g].id + "\" references unknown sector \"" + id + "\"");
            auto& set = b.per_sector[*k];
            if (std::find(set.begin(), set.end(), nsec + g) == set.end())
                set.push_back(nsec + g);
        }
    return b;
}

UplinkProblem UplinkProblem::full_interference(std::size_t mobiles, std::size_t points, std::vector<double> gain,
                                               std::vector<double> noise_mw,
                                               std::vector<std::vector<std::size_t>> branches,
                                               std::vector<double> target, Combining combining, PowerLimits limits)
{
    UplinkProblem p;
    p.mobiles = mobiles;
    p.points = points;
    p.gain = std::move(gain);
    p.noise_mw = std::move(noise_mw);
    p.branches = std::move(branches);
    p.target = std::move(target);
    p.group.resize(mobiles);
    for (std::size_t i = 0; i < mobiles; ++i)
        p.group[i] = i;
    p.inter_weight.assign(mobiles, 1.0);
    p.intra_group_weight = 1.0;
    p.combining = combining;
    p.limits = limits;
    if (p.gain.size() != mobiles * points || p.noise_mw.size() != points || p.branches.size() != mobiles ||
        p.target.size() != mobiles)
        throw std::invalid_argument("inconsistent uplink problem dimensions");
    return p;
}

UplinkProblem make_problem(const Scenario& s, const std::vector<MobileStation>& mobiles, const LinkGainMatrix& gm,
                           const Association& assoc, const BranchSet& branches, Combining combining)
{
    const std::size_t n = mobiles.size();
    if (gm.mobile_count() != n || assoc.serving.size() != n)
        throw std::invalid_argument("gain matrix, association and mobiles disagree in size");

    UplinkProblem p;
    p.mobiles = n;
    p.points = gm.point_count();
    p.gain.resize(gm.ul_table().size());
    std::transform(gm.ul_table().begin(), gm.ul_table().end(), p.gain.begin(), db_to_linear);

    const auto points = receive_points(s);
    p.noise_mw.reserve(points.size());
    for (const auto& rp : points)
        p.noise_mw.push_back(db_to_linear(s.radio.thermal_noise_dbm + rp.noise_figure_db));

    p.branches.reserve(n);
    p.target.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.branches.push_back(branches.per_sector.at(assoc.serving[i]));
        p.target.push_back(db_to_linear(mobiles[i].sinr_target_db));
    }
    p.group = assoc.serving;

    if (s.radio.uplink_access == UplinkAccess::ofdma) {
        std::vector<std::size_t> load(gm.sector_count(), 0);
        for (std::size_t k : assoc.serving)
            ++load[k];
        p.inter_weight.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            p.inter_weight[j] = 1.0 / static_cast<double>(load[assoc.serving[j]]);
        p.intra_group_weight = 0.0;
    } else {
        p.inter_weight.assign(n, 1.0);
        p.intra_group_weight = 1.0;
    }
    p.combining = combining;
    p.limits = {s.radio.p_min_dbm, s.radio.p_max_dbm};
    return p;
}

InterferenceField::InterferenceField(const UplinkProblem& problem, const std::vector<double>& powers_mw)
    : problem_(problem), powers_(powers_mw)
{
    if (powers_mw.size() != problem.mobiles)
        throw std::invalid_argument("power vector size does not match the problem");
    for (std::size_t g : problem.group)
        groups_ = std::max(groups_, g + 1);
    weighted_by_group_.assign(groups_ * problem.points, 0.0);
    members_.resize(groups_);
    for (std::size_t j = 0; j < problem.mobiles; ++j) {
        const std::size_t g = problem.group[j];
        members_[g].push_back(j);
        const double pw = problem.inter_weight[j] * powers_mw[j];
        double* row = &weighted_by_group_[g * problem.points];
        for (std::size_t r = 0; r < problem.points; ++r)
            row[r] += pw * problem.g(j, r);
    }
}

double InterferenceField::interference(std::size_t ms, std::size_t rp) const
{
    const std::size_t own = problem_.group[ms];
    double sum = 0.0;
    for (std::size_t g = 0; g < groups_; ++g)
        if (g != own)
            sum += weighted_by_group_[g * problem_.points + rp];
    if (problem_.intra_group_weight > 0.0) {
        double intra = 0.0;
        for (std::size_t j : members_[own])
            if (j != ms)
                intra += powers_[j] * problem_.g(j, rp);
        sum += problem_.intra_group_weight * intra;
    }
    return sum;
}

double InterferenceField::sinr_per_mw(std::size_t ms) const
{
    const auto& branches = problem_.branches[ms];
    switch (problem_.combining) {
    case Combining::mrc: {
        double sum = 0.0;
        for (std::size_t r : branches)
            sum += problem_.g(ms, r) / (interference(ms, r) + problem_.noise_mw[r]);
        return sum;
    }
    case Combining::selection: {
        double best = 0.0;
        for (std::size_t r : branches)
            best = std::max(best, problem_.g(ms, r) / (interference(ms, r) + problem_.noise_mw[r]));
        return best;
    }
    case Combining::egc: {
        double amplitude = 0.0;
        double disturbance = 0.0;
        for (std::size_t r : branches) {
            amplitude += std::sqrt(problem_.g(ms, r));
            disturbance += interference(ms, r) + problem_.noise_mw[r];
        }
        return amplitude * amplitude / disturbance;
    }
    }
    return 0.0;
}

double effective_sinr(const UplinkProblem& problem, const std::vector<double>& powers_mw, std::size_t ms)
{
    const InterferenceField field(problem, powers_mw);
    return linear_to_db(powers_mw.at(ms) * field.sinr_per_mw(ms));
}

std::vector<double> interference_function(const UplinkProblem& problem, const std::vector<double>& powers_mw)
{
    // gamma * p / (p * q) with the p_i factor cancelled analytically.
    const InterferenceField field(problem, powers_mw);
    std::vector<double> out(problem.mobiles);
    for (std::size_t i = 0; i < problem.mobiles; ++i)
        out[i] = problem.target[i] / field.sinr_per_mw(i);
    return out;
}

std::vector<double> power_control_step(const UplinkProblem& problem, const std::vector<double>& powers_mw)
{
    const double lo = db_to_linear(problem.limits.p_min_dbm);
    const double hi = db_to_linear(problem.limits.p_max_dbm);
    auto next = interference_function(problem, powers_mw);
    for (double& p : next)
        p = std::clamp(p, lo, hi);
    return next;
}

PowerControlResult solve_power_control(const UplinkProblem& problem, const SolverOptions& options)
{
    std::vector<double> p(problem.mobiles, db_to_linear(problem.limits.p_min_dbm));
    PowerControlResult res;
    if (problem.mobiles == 0) {
        res.converged = true;
        return res;
    }
    double previous = INFINITY;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        auto next = power_control_step(problem, p);
        double change = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            change = std::max(change, std::abs(linear_to_db(next[i] / p[i])));
        p = std::move(next);
        res.iterations = it;
        // Geometric tail estimate of the remaining drift.
        const double ratio = change / previous;
        const bool settled = change <= options.tolerance_db * 1e-3 ||
                             (ratio < 1.0 && change * ratio / (1.0 - ratio) < options.tolerance_db);
        previous = change;
        if (change < options.tolerance_db && settled && it >= options.min_iterations) {
            res.converged = true;
            break;
        }
    }

    const InterferenceField field(problem, p);
    res.tx_power_dbm.resize(problem.mobiles);
    res.sinr_db.resize(problem.mobiles);
    res.outage.resize(problem.mobiles);
    for (std::size_t i = 0; i < problem.mobiles; ++i) {
        res.tx_power_dbm[i] = std::clamp(linear_to_db(p[i]), problem.limits.p_min_dbm, problem.limits.p_max_dbm);
        res.sinr_db[i] = linear_to_db(p[i] * field.sinr_per_mw(i));
        const bool pinned = res.tx_power_dbm[i] >= problem.limits.p_max_dbm - 1e-9;
        res.outage[i] = pinned && res.sinr_db[i] < linear_to_db(problem.target[i]) - options.outage_margin_db;
    }
    return res;
}

PowerControlResult solve_power_control(const Scenario& s, const std::vector<MobileStation>& mobiles,
                                       const LinkGainMatrix& gm, const Association& assoc, Combining combining,
                                       const SolverOptions& options)
{
    const auto problem = make_problem(s, mobiles, gm, assoc, receive_branches(s), combining);
    return solve_power_control(problem, options);
}

} // namespace greencell
