#ifndef GREENCELL_CAMPAIGN_HPP
#define GREENCELL_CAMPAIGN_HPP

#include "greencell/metrics.hpp"
#include "greencell/powerctl.hpp"
#include "greencell/propagation.hpp"
#include "greencell/scenario.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace greencell {

/// Seed of snapshot `index` under a master seed.
std::uint64_t snapshot_seed(std::uint64_t master_seed, std::size_t index) noexcept;

struct CampaignOptions
{
    std::uint64_t seed = 1;
    std::size_t snapshots = 1;
    Combining combining = Combining::mrc;
    unsigned jobs = 1;
    SolverOptions solver;
};

struct SnapshotOutcome
{
    std::vector<MobileStation> mobiles;
    Association association;
    PowerControlResult result;
};

/// Drops mobiles, builds the channel tables and solves power control for one snapshot.
SnapshotOutcome run_snapshot(const Scenario& s, std::uint64_t seed, Combining combining,
                             const SolverOptions& solver = {});

/// Runs `snapshots` independent snapshots on a pool of `jobs` workers.
/// Outcomes are indexed by snapshot, whatever the scheduling.
std::vector<SnapshotOutcome> run_campaign(const Scenario& s, const CampaignOptions& options);

class PairingError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// One drop solved under several variants of the same world (e.g. without and
/// with greens). All variants run the same number of solver iterations, so
/// per-mobile orderings that hold for every iterate also hold for the results.
struct VariantSnapshot
{
    std::vector<MobileStation> mobiles;
    Association association;
    std::vector<PowerControlResult> results; ///< one per variant
};

struct Variant
{
    const Scenario* scenario;
    Combining combining;
};

/// Solves every variant on the same drop. Variants must differ at most in
/// their greens lists and combining rule; the drop, the association and every
/// shared channel entry are checked to be bit-identical, else PairingError.
VariantSnapshot run_variant_snapshot(const std::vector<Variant>& variants, std::uint64_t seed,
                                     const SolverOptions& solver = {});

std::vector<VariantSnapshot> run_variant_campaign(const std::vector<Variant>& variants, std::uint64_t master_seed,
                                                  std::size_t snapshots, unsigned jobs, const SolverOptions& solver = {});

/// Re-solves the problems so they all stop on the same iteration count.
std::vector<PowerControlResult> solve_jointly(const std::vector<UplinkProblem>& problems, const SolverOptions& solver);

/// Runs body(i) for i in [0, count) on up to `jobs` threads and rethrows the
/// first exception by index.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

/// Filtered Tx-power samples pooled over snapshots in index order.
std::vector<double> pooled_samples(const std::vector<SnapshotOutcome>& snapshots, const PopulationFilter& filter);
std::vector<double> pooled_samples(const std::vector<VariantSnapshot>& snapshots, std::size_t variant,
                                   const PopulationFilter& filter);

} // namespace greencell

#endif
