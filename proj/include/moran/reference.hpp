#ifndef MORAN_REFERENCE_HPP
#define MORAN_REFERENCE_HPP

#include <cstdint>
#include <vector>

#include "moran/params.hpp"
#include "moran/rng.hpp"

namespace moran {

/// Deterministic field on the lattice window, same geometry as the
/// simulator's snapshots.
struct LatticeField {
  double time = 0.0;
  int n = 1;
  int32_t lo = 0;  // lattice coord of u[0]
  std::vector<double> u;

  double x_of(size_t i) const { return double(lo + int32_t(i)) / n; }
};

/// Explicit-Euler trajectory of the semi-discrete bistable system
///   du/dt = (m/2) Lap_n u + s0 f(u),
/// Lap_n h(x) = n^2 (h(x+1/n) - 2h(x) + h(x-1/n)); Dirichlet ghosts are
/// frozen at the initial edge values (1 left / 0 right for a front-like
/// profile).  Fields are emitted at t=0 and every `cadence` (plus the
/// final time).  Throws domain_error when dt > 1/(2 m n^2).
std::vector<LatticeField> pde_solve(const ModelParams& p, const LatticeField& u0,
                                    double T, double dt, double cadence = 0.1);

/// Co-evolves u (as above) and the linear tracer field
///   dv/dt = (m/2) Lap_n v + s0 v (1-u)(2u-1+alpha),
/// v pinned to its initial edge values.  Returns the v-trajectory.
/// Throws domain_error on grid mismatch or stability violation.
std::vector<LatticeField> tracer_pde_solve(const ModelParams& p,
                                           const LatticeField& v0,
                                           const LatticeField& u0, double T,
                                           double dt, double cadence = 0.1);

/// Euler-Maruyama path of the lineage diffusion
///   dZ = [nu - m kappa (1 - g(Z))] dt + sqrt(m) dB
/// (the drift is m grad g / g + nu in its tail-stable algebraic form).
/// Returns the positions after every step, z0 first.
std::vector<double> sde_simulate(const ModelParams& p, double z0, double T,
                                 double dt, uint64_t seed);

/// Thinned stationary sample: burn-in, then n_samples values taken every
/// `thin` steps.
std::vector<double> sde_stationary_sample(const ModelParams& p, double z0,
                                          double burn_in, double dt, int thin,
                                          int n_samples, uint64_t seed);

/// Standard Kingman k-coalescent: with j blocks the next merger is after an
/// Exp(j(j-1)/2) time and merges a uniform pair of blocks.
struct KingmanResult {
  struct Merger {
    double time;
    int b1, b2;  // smallest leaf labels of the merged blocks
  };
  std::vector<Merger> mergers;
  std::vector<double> tau;  // k x k pairwise coalescence times, 0 diagonal
  int k = 0;

  double tau_at(int i, int j) const { return tau[size_t(i) * k + j]; }
};
KingmanResult kingman_sample(int k, uint64_t seed);

}  // namespace moran

#endif
