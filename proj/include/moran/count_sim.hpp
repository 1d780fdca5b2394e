#ifndef MORAN_COUNT_SIM_HPP
#define MORAN_COUNT_SIM_HPP

#include <cstdint>
#include <vector>

#include "moran/params.hpp"
#include "moran/rng.hpp"

namespace moran {

/// Deme-count projection of the label model: the per-site type-A counts
/// a(x) form an autonomous Markov chain (all per-slot rates depend on the
/// configuration only through counts), so the chain below has exactly the
/// marginal law of a(x) under the full simulator.  Boundaries are pinned:
/// all-A beyond the left edge, all-a beyond the right.
struct CountState {
  double time = 0.0;
  int32_t wlo = 0;  // lattice coord of a[0]
  std::vector<int32_t> a;

  int32_t whi() const { return wlo + int32_t(a.size()) - 1; }
  /// Count with the pinned-boundary extension (N left, 0 right).
  int32_t at(int32_t site, int N) const {
    if (site < wlo) return N;
    if (site > whi()) return 0;
    return a[size_t(site - wlo)];
  }
};

/// One accepted count transition.  delta = +1/-1 flips one slot at `site`;
/// parent_off in {-1,0,+1} is the deme the incoming type was copied from.
/// delta = 0 marks a window slide: the window becomes [site, site+W-1] and
/// the retired left site is frozen at a = N.
struct CountEvent {
  double t;
  int32_t site;
  int8_t delta;
  int8_t parent_off;
};

struct CountRecord {
  CountState initial;
  CountState final_state;
  std::vector<CountEvent> events;
};

struct CountRunOptions {
  /// Slide the window right when the rightmost occupied site comes within
  /// this many sites of the right edge (and the left edge is saturated).
  int slide_margin = 8;
  bool allow_slide = true;
};

/// Front-like initial condition a = round(N g(x - center)); the window must
/// satisfy the same saturation conditions as the label initializer.
CountState count_initial(const ModelParams& p, int32_t win_lo, int32_t win_hi,
                         double center);

/// Per-site total transition rate given the count and its two neighbours
/// (with the pinned extension applied by the caller).
double count_site_rate(const ModelParams& p, int32_t a, int32_t al, int32_t ar);

/// Exact Gillespie realization of the count chain over
/// [state.time, state.time + T], recording every transition.
CountRecord count_run(const ModelParams& p, CountState state, double T,
                      uint64_t seed, const CountRunOptions& opt = {});

/// mu = sup{x : a(x) >= N/2}; throws sim_error when the window is all < N/2
/// and the left boundary is not saturated.
double count_front_position(const ModelParams& p, const CountState& state);

/// Replays the recorded events backward from final_state; returns the state
/// at the record's initial time (exact undo, used by tests and the backward
/// lineage sampler).
CountState count_rewind(const ModelParams& p, const CountRecord& rec);

}  // namespace moran

#endif
