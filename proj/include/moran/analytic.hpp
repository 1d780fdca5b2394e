#ifndef MORAN_ANALYTIC_HPP
#define MORAN_ANALYTIC_HPP

#include <functional>
#include <vector>

#include "moran/params.hpp"
#include "moran/rng.hpp"

namespace moran {

/// Limit wave profile g(x) = (1 + e^{kappa x})^{-1}.
double wave_profile(double x, double kappa);

/// Spatial derivative g'(x) = -kappa * g * (1 - g).
double wave_profile_grad(double x, double kappa);

/// Bistable reaction term f(u) = u (1-u) (2u - 1 + alpha).
double reaction(double u, double alpha);

/// Adaptive Simpson quadrature of f on [a,b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

/// Integrals of the limit objects and the stationary lineage density pi.
///
/// pi(x) = g(x)^2 e^{alpha kappa x} / Z,   Z = integral of the numerator,
/// I3    = integral of g(x)^3 e^{2 alpha kappa x}.
///
/// Both integrands decay exponentially in each direction for alpha in (0,1);
/// the integration window [-L, L] is chosen so the certified tail bounds
/// (e^{(alpha-2)kappa y} to the right, e^{alpha kappa y} to the left) are
/// below 1e-14, i.e. truncation error is negligible next to the quadrature
/// tolerance.
class AnalyticTables {
 public:
  explicit AnalyticTables(const ModelParams& p);

  double Z() const { return Z_; }
  double I3() const { return I3_; }

  /// Normalized stationary density of the ancestral lineage position.
  double pi(double x) const;

  /// CDF of pi, by interpolation on a precomputed grid.
  double pi_cdf(double x) const;

  /// Inverse-CDF sample from pi.
  double sample_pi(CounterRng& rng) const;

  /// argmax of pi: x* = kappa^{-1} log(alpha / (2 - alpha)), where the
  /// stationarity condition grad[2 log g + alpha kappa x] = 0 gives
  /// g(x*) = 1 - alpha/2.
  double pi_mode() const;

  /// Pair coalescence rate of the limiting Kingman coalescent:
  /// Lambda = (1 + 2m) (n/N) I3 / Z^2.
  double kingman_rate() const;

  double grid_lo() const { return lo_; }
  double grid_hi() const { return hi_; }

 private:
  ModelParams p_;
  double lo_ = 0.0, hi_ = 0.0;  // certified truncation window
  double Z_ = 0.0, I3_ = 0.0;
  std::vector<double> cdf_;  // pi CDF on a uniform grid over [lo_, hi_]
  double dx_grid_ = 0.0;
};

}  // namespace moran

#endif
