#ifndef MORAN_LINEAGE_HPP
#define MORAN_LINEAGE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "moran/event_log.hpp"
#include "moran/moran_sim.hpp"

namespace moran {

/// A slot is a (lattice site, label) pair.
using Slot = std::pair<int32_t, uint16_t>;

/// Backward trajectory of one sampled individual.  The lineage sits at the
/// anchor until the first jump; jump k moves it to (site,idx) at backward
/// time T - t.
struct LineagePath {
  int sample = 0;
  double T = 0.0;  // anchor forward time
  Slot anchor;
  struct Jump {
    double t;  // forward event time
    int32_t site;
    uint16_t idx;
    bool virt;  // ancestor beyond the pinned window edge
  };
  std::vector<Jump> jumps;  // decreasing forward time

  /// Ancestor slot at backward time tb (forward time T - tb).
  Slot at_backward(double tb) const;
  /// CSV rows `sample,t_back,site,index`: anchor then each jump.
  void write_csv(std::ostream& os) const;
};

/// Pairwise first-coalescence backward times; nullopt = not within the
/// traced horizon (censored), kept distinct from any numeric value.
struct CoalescenceMatrix {
  int k = 0;
  std::vector<std::optional<double>> tau;  // row-major upper triangle

  explicit CoalescenceMatrix(int k_ = 0) : k(k_), tau(size_t(k_) * k_) {}
  std::optional<double>& at(int i, int j) { return tau[size_t(i) * k + j]; }
  const std::optional<double>& at(int i, int j) const { return tau[size_t(i) * k + j]; }
  /// CSV upper triangle `i,j,tau` with `inf` for censored entries.
  void write_csv(std::ostream& os) const;
};

struct TraceResult {
  std::vector<LineagePath> paths;
  CoalescenceMatrix tau;
};

/// Short-window diagnostics parameters; delta defaults to the 1/floor(sqrt(N) n^2)
/// window scale when left at 0.
struct DiagnosticsConfig {
  double delta = 0.0;
  double y = 0.0, ell = 1.0, s = 0.0;
  static double default_delta(const ModelParams& p);
};

/// Backward ancestral-lineage reconstruction over an event log.
///
/// Scans events in (T - horizon, T] in descending time; when an event's
/// target equals a lineage's current slot the lineage jumps to the event's
/// parent (the log stores only accepted replacements, so the S/Q type
/// conditions are already resolved).  Coalescence is recorded the first
/// backward time two lineages share a slot; coalesced lineages share all
/// further jumps.  win_lo/win_hi classify out-of-window parents as frozen
/// virtual ancestors.  Throws domain_error on horizon > T - log_t_min or an
/// out-of-window sample.
TraceResult trace(const EventLog& log, double T,
                  const std::vector<Slot>& samples, double horizon,
                  int32_t win_lo, int32_t win_hi, double log_t_min = 0.0);

/// Fraction of the N slots at x2 that are type A at t2 and whose time-t1
/// ancestor is at x1.  state_t2 must be the population state at time t2 and
/// the log must cover (t1, t2] with an A-parent-complete filter.
double tracer_q(const EventLog& log, const PopulationState& state_t2, double t1,
                double t2, int32_t x1, int32_t x2, double log_t_min = 0.0);

/// One-sided variants: ancestor site >= x1 (dir = +1) or <= x1 (dir = -1).
double tracer_q_sided(const EventLog& log, const PopulationState& state_t2,
                      double t1, double t2, int32_t x1, int32_t x2, int dir,
                      double log_t_min = 0.0);

/// |C_t(x_1,..,x_ell)|: ordered tuples of distinct type-A individuals at the
/// given sites at time t+delta sharing one time-t ancestor.  ell = x_list
/// size must be 2 or 3.
long pair_ancestor_counts(const EventLog& log, const PopulationState& state_after,
                          double t, double delta,
                          const std::vector<int32_t>& x_list,
                          double log_t_min = 0.0);

/// Fraction of slots at x, type A at time t, whose ancestor satisfied
/// zeta >= mu(t') + y at every stride time t' = t - j*ell in [t-s, t].
double stayed_ahead_fraction(const EventLog& log, const PopulationState& state_t,
                             const std::function<double(double)>& mu_of_t,
                             double y, double ell, double s, double t, int32_t x,
                             double log_t_min = 0.0);

/// Apply the events of a full log with t in (state.time, t1] to the state.
void replay(PopulationState& state, const EventLog& log, double t1);

/// k distinct type-A slots with |x - mu| <= K0, uniform without replacement.
/// Throws sim_error when fewer than k such slots exist.
std::vector<Slot> sample_near_front(const PopulationState& state, double K0, int k,
                                    CounterRng& rng);

}  // namespace moran

#endif
