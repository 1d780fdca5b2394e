#ifndef MORAN_LINEAGE_COUNT_HPP
#define MORAN_LINEAGE_COUNT_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "moran/count_sim.hpp"
#include "moran/lineage.hpp"

namespace moran {

struct CountTraceOptions {
  /// Backward times at which to record every lineage's (ancestor) site.
  std::vector<double> checkpoints;
};

struct CountTraceResult {
  CoalescenceMatrix tau;  // pairwise first-coalescence backward times
  struct Merger {
    double t_back;
    int b1, b2;  // smallest member labels of the merged groups
  };
  std::vector<Merger> mergers;
  /// sites_at[c][i]: site of lineage i's ancestor at checkpoints[c]
  /// (checkpoints are processed in decreasing backward-time order but
  /// reported in the order given).
  std::vector<std::vector<int32_t>> sites_at;
};

/// Conditional backward lineage sampler over a count record.
///
/// Given the count path, slot labels within a deme are exchangeable, so a
/// type-A lineage is uniform over the a(x) type-A slots of its deme at every
/// time.  Going backward from the final time:
///  - an up transition at the lineage's deme created its slot with
///    probability 1/a(e+); the lineage then jumps to the parent deme and is
///    uniform over its type-A slots (coalescing with a co-located lineage
///    with probability 1/a_parent);
///  - down transitions never hit a type-A lineage (the destroyed slot has no
///    descendants);
///  - count-invisible A-to-A replacements hitting the lineage's slot form a
///    Cox process with the per-lineage rate
///      h = r_n (a-1) (1 - s_n + (a-2) s_n / N) + m r_n (a_l + a_r),
///    resolved into a same-deme slot shuffle or a migration jump.
/// Demes left of the recorded window are the frozen all-A bulk.
///
/// start_sites must name type-A-occupied demes at the record's final time
/// (repeats denote distinct slots).  Throws domain_error when the horizon
/// exceeds the recorded span or a start site has too few type-A slots.
CountTraceResult trace_count(const ModelParams& p, const CountRecord& rec,
                             const std::vector<int32_t>& start_sites,
                             double horizon, uint64_t seed,
                             const CountTraceOptions& opt = {});

/// k type-A slots (as deme sites, repeats = distinct slots) uniform without
/// replacement among slots with |x - mu| <= K0.  Throws sim_error when fewer
/// than k exist.
std::vector<int32_t> sample_band_count(const ModelParams& p,
                                       const CountState& state, double K0,
                                       int k, CounterRng& rng);

}  // namespace moran

#endif
