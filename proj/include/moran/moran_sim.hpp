#ifndef MORAN_MORAN_SIM_HPP
#define MORAN_MORAN_SIM_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "moran/event_log.hpp"
#include "moran/params.hpp"
#include "moran/rng.hpp"

namespace moran {

class AncestryRecorder;

/// Behaviour at the window edges.
/// pinned: the half-lines beyond the window are frozen all-A (left) and
///         all-a (right); migration across the edge copies those types.
/// closed: no migration clocks cross the edge (an isolated box).
enum class BoundaryMode : uint8_t { pinned, closed };

enum class LogFilter : uint8_t { off, full, a_parent_only };

struct sim_error : std::runtime_error {
  explicit sim_error(const std::string& w) : std::runtime_error(w) {}
};

/// Lattice window of demes with per-slot types and cached counts.
/// Site s (integer, units of 1/n) holds N slots; position x = s/n.
struct PopulationState {
  double time = 0.0;
  int n = 1, N = 2;
  int32_t lo = 0, hi = 0;  // inclusive lattice window
  BoundaryMode boundary = BoundaryMode::pinned;
  std::vector<uint8_t> types;   // [(site-lo)*N + idx], 1 = type A
  std::vector<int32_t> counts;  // a(site) = sum of types in the deme

  int32_t nsites() const { return hi - lo + 1; }
  uint8_t type(int32_t site, int idx) const { return types[size_t(site - lo) * N + idx]; }
  uint8_t& type(int32_t site, int idx) { return types[size_t(site - lo) * N + idx]; }
  int32_t count(int32_t site) const { return counts[size_t(site - lo)]; }
  double p(int32_t site) const { return double(count(site)) / N; }
  double x_of(int32_t site) const { return double(site) / n; }
};

struct Snapshot {
  double time;
  int32_t lo;                // lattice coord of first entry
  std::vector<double> p;     // type-A fraction per site
};

struct RunOptions {
  LogFilter filter = LogFilter::off;
  double snapshot_cadence = 0.1;  // <= 0 disables periodic snapshots
  bool escape_guard = true;       // pinned mode only
  AncestryRecorder* recorder = nullptr;
  // restrict logging to t in [log_t_min, log_t_max]
  double log_t_min = 0.0;
  double log_t_max = std::numeric_limits<double>::infinity();
};

struct RunResult {
  EventLog log;
  std::vector<Snapshot> snapshots;
};

/// Deterministic front-like initial condition a(x) = round(N g(x - center))
/// with uniformly random labels within each deme.
/// Throws domain_error if the window is too narrow for the flat far fields
/// (g(x_lo - center) > 1 - 1/(2N) and g(x_hi - center) < 1/(2N) required).
PopulationState build_initial(const ModelParams& p, int32_t win_lo, int32_t win_hi,
                              double center, CounterRng& rng,
                              BoundaryMode boundary = BoundaryMode::pinned);

/// Exact Gillespie realization of the model over [state.time, state.time + T].
/// Advances `state` in place; fully determined by (params, state, T, seed).
/// Throws sim_error if the front reaches the 5-site guard band of either edge
/// (checked at snapshot times, pinned mode with escape_guard only).
RunResult run(const ModelParams& p, PopulationState& state, double T, uint64_t seed,
              const RunOptions& opt = {});

/// mu = sup{x in window : p(x) >= 1/2}.  Throws sim_error when every site has
/// p < 1/2.
double front_position(const PopulationState& state);

/// Per-site candidate-event rate (accepted + rejected), constant in time.
double site_event_rate(const ModelParams& p);

}  // namespace moran

#endif
