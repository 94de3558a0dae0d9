#include "greencell/campaign.hpp"

#include "greencell/rng.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace greencell {

std::uint64_t snapshot_seed(std::uint64_t master_seed, std::size_t index) noexcept
{
    return derive_seed(master_seed, "snapshot", index);
}

SnapshotOutcome run_snapshot(const Scenario& s, std::uint64_t seed, Combining combining, const SolverOptions& solver)
{
    SnapshotOutcome out;
    out.mobiles = drop_mobiles(s, seed);
    const auto gm = build_gain_matrix(s, out.mobiles, derive_seed(seed, "shadowing"));
    out.association = associate(gm);
    out.result = solve_power_control(s, out.mobiles, gm, out.association, combining, solver);
    return out;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::vector<SnapshotOutcome> run_campaign(const Scenario& s, const CampaignOptions& options)
{
    std::vector<SnapshotOutcome> out(options.snapshots);
    parallel_for(options.snapshots, options.jobs, [&](std::size_t k) {
        out[k] = run_snapshot(s, snapshot_seed(options.seed, k), options.combining, options.solver);
    });
    return out;
}

std::vector<PowerControlResult> solve_jointly(const std::vector<UplinkProblem>& problems, const SolverOptions& solver)
{
    std::vector<PowerControlResult> results;
    results.reserve(problems.size());
    std::size_t longest = 0;
    for (const auto& p : problems) {
        results.push_back(solve_power_control(p, solver));
        longest = std::max(longest, results.back().iterations);
    }
    SolverOptions aligned = solver;
    aligned.min_iterations = longest;
    for (std::size_t v = 0; v < problems.size(); ++v)
        if (results[v].iterations < longest)
            results[v] = solve_power_control(problems[v], aligned);
    return results;
}

VariantSnapshot run_variant_snapshot(const std::vector<Variant>& variants, std::uint64_t seed,
                                     const SolverOptions& solver)
{
    if (variants.empty())
        throw std::invalid_argument("no variants to run");
    const Scenario& first = *variants.front().scenario;
    for (const auto& v : variants)
        if (!differs_only_in_greens(first, *v.scenario))
            throw PairingError("paired scenarios differ outside the greens list");

    VariantSnapshot out;
    out.mobiles = drop_mobiles(first, seed);
    const std::uint64_t shadow_seed = derive_seed(seed, "shadowing");
    const std::size_t nsec = first.sector_count();

    std::vector<LinkGainMatrix> matrices;
    std::vector<UplinkProblem> problems;
    for (std::size_t v = 0; v < variants.size(); ++v) {
        const Scenario& s = *variants[v].scenario;
        if (v > 0 && drop_mobiles(s, seed) != out.mobiles)
            throw PairingError("mobile drops differ across paired scenarios");
        matrices.push_back(build_gain_matrix(s, out.mobiles, shadow_seed));
        const LinkGainMatrix& gm = matrices.back();
        const Association assoc = associate(gm);
        if (v == 0) {
            out.association = assoc;
        } else {
            if (assoc.serving != out.association.serving)
                throw PairingError("association differs across paired scenarios");
            const LinkGainMatrix& ref = matrices.front();
            if (gm.dl_table() != ref.dl_table())
                throw PairingError("downlink tables differ across paired scenarios");
            // Receive points shared by id must carry identical UL gains.
            const auto ref_points = receive_points(first);
            const auto points = receive_points(s);
            for (std::size_t r = 0; r < ref_points.size(); ++r) {
                const auto it = std::find_if(points.begin(), points.end(),
                                             [&](const ReceivePoint& p) { return p.id == ref_points[r].id; });
                if (it == points.end()) {
                    if (r < nsec)
                        throw PairingError("sector antenna missing from a paired scenario");
                    continue;
                }
                const std::size_t q = static_cast<std::size_t>(it - points.begin());
                for (std::size_t i = 0; i < out.mobiles.size(); ++i)
                    if (gm.ul_gain_db(i, q) != ref.ul_gain_db(i, r))
                        throw PairingError("uplink gains differ across paired scenarios");
            }
        }
        problems.push_back(make_problem(s, out.mobiles, gm, assoc, receive_branches(s), variants[v].combining));
    }
    out.results = solve_jointly(problems, solver);
    return out;
}

std::vector<VariantSnapshot> run_variant_campaign(const std::vector<Variant>& variants, std::uint64_t master_seed,
                                                  std::size_t snapshots, unsigned jobs, const SolverOptions& solver)
{
    std::vector<VariantSnapshot> out(snapshots);
    parallel_for(snapshots, jobs, [&](std::size_t k) {
        out[k] = run_variant_snapshot(variants, snapshot_seed(master_seed, k), solver);
    });
    return out;
}

std::vector<double> pooled_samples(const std::vector<SnapshotOutcome>& snapshots, const PopulationFilter& filter)
{
    std::vector<double> out;
    for (const auto& snap : snapshots) {
        const auto part = filter_population(snap.mobiles, snap.result, filter);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::vector<double> pooled_samples(const std::vector<VariantSnapshot>& snapshots, std::size_t variant,
                                   const PopulationFilter& filter)
{
    std::vector<double> out;
    for (const auto& snap : snapshots) {
        const auto part = filter_population(snap.mobiles, snap.results.at(variant), filter);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace greencell
