#ifndef MORAN_STATS_HPP
#define MORAN_STATS_HPP

#include <functional>
#include <vector>

#include "moran/lineage.hpp"
#include "moran/moran_sim.hpp"
#include "moran/params.hpp"

namespace moran {

struct KSResult {
  double D = 0.0;
  size_t n = 0;
  double p_value = 1.0;
};

/// Two-sided one-sample Kolmogorov-Smirnov test against a monotone reference
/// CDF, with the asymptotic Kolmogorov p-value (series truncated below
/// 1e-12).  Throws domain_error on an empty sample.
KSResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& reference_cdf);

/// Two-sample KS statistic and asymptotic p-value.
KSResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic Kolmogorov survival function Q(lambda) = P(sup > lambda).
double kolmogorov_q(double lambda);

/// Regularized upper incomplete gamma Q(a,x); chi^2_k tail is Q(k/2, x/2).
double gamma_q(double a, double x);

struct LineFit {
  double speed = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS deviation
};

/// Least-squares line through (time, mu) pairs.  Throws domain_error with
/// fewer than two distinct times.
LineFit front_speed_fit(const std::vector<std::pair<double, double>>& front_series);

/// sup_x |p(x) - g(x - center)| over the window interior with 5 sites
/// trimmed at each end.
double profile_error(const Snapshot& snap, double center, const ModelParams& p);

struct RescaledTaus {
  std::vector<double> values;  // finite entries multiplied by the rate
  double censoring_fraction = 0.0;
};

/// Multiplies each finite coalescence time by rate_constant; censored
/// entries are excluded and reported as a fraction.  Throws domain_error
/// when every entry is censored.
RescaledTaus coalescent_rescale(const CoalescenceMatrix& tau, double rate_constant);

}  // namespace moran

#endif
