#include "moran/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace moran {

double wave_profile(double x, double kappa) {
  // Evaluate in the numerically stable branch to avoid overflow of e^{kx}.
  double t = kappa * x;
  if (t > 0) {
    double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

double wave_profile_grad(double x, double kappa) {
  double g = wave_profile(x, kappa);
  return -kappa * g * (1.0 - g);
}

double reaction(double u, double alpha) {
  return u * (1.0 - u) * (2.0 * u - 1.0 + alpha);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b,
                double fb, double fm, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, flm);
  double right = simpson(f, m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = simpson(f, a, fa, b, fb, fm);
  return adaptive(f, a, fa, b, fb, fm, whole, tol, 40);
}

AnalyticTables::AnalyticTables(const ModelParams& p) : p_(p) {
  double k = p.kappa, a = p.alpha;
  // Tail bounds for the slower-decaying integrand g^2 e^{a k x}:
  // right tail <= e^{(a-2) k x}, left tail <= e^{a k x}.  Choose L so both
  // are below 1e-14 (the I3 integrand decays at least as fast).
  double log_tol = std::log(1e-14);
  hi_ = -log_tol / ((2.0 - a) * k);
  lo_ = log_tol / (a * k);

  auto pi_raw = [k, a](double x) {
    double g = wave_profile(x, k);
    return g * g * std::exp(a * k * x);
  };
  auto i3_raw = [k, a](double x) {
    double g = wave_profile(x, k);
    return g * g * g * std::exp(2.0 * a * k * x);
  };
  Z_ = integrate(pi_raw, lo_, hi_, 1e-13);
  I3_ = integrate(i3_raw, lo_, hi_, 1e-13);

  // CDF grid for pi: cumulative Simpson on a fine uniform mesh.
  const int M = 100000;
  cdf_.assign(M + 1, 0.0);
  dx_grid_ = (hi_ - lo_) / M;
  double acc = 0.0;
  double prev = pi_raw(lo_);
  for (int i = 1; i <= M; ++i) {
    double xm = lo_ + (i - 0.5) * dx_grid_;
    double cur = pi_raw(lo_ + i * dx_grid_);
    acc += dx_grid_ / 6.0 * (prev + 4.0 * pi_raw(xm) + cur);
    cdf_[i] = acc;
    prev = cur;
  }
  for (auto& c : cdf_) c /= acc;
}

double AnalyticTables::pi(double x) const {
  double g = wave_profile(x, p_.kappa);
  return g * g * std::exp(p_.alpha * p_.kappa * x) / Z_;
}

double AnalyticTables::pi_cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  double u = (x - lo_) / dx_grid_;
  size_t i = size_t(u);
  if (i + 1 >= cdf_.size()) return 1.0;
  double frac = u - double(i);
  return cdf_[i] + frac * (cdf_[i + 1] - cdf_[i]);
}

double AnalyticTables::sample_pi(CounterRng& rng) const {
  double u = rng.next_open_double();
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  size_t i = size_t(it - cdf_.begin());
  if (i == 0) return lo_;
  double c0 = cdf_[i - 1], c1 = cdf_[i];
  double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
  return lo_ + (double(i - 1) + frac) * dx_grid_;
}

double AnalyticTables::pi_mode() const {
  return std::log(p_.alpha / (2.0 - p_.alpha)) / p_.kappa;
}

double AnalyticTables::kingman_rate() const {
  return (1.0 + 2.0 * p_.m) * (double(p_.n) / p_.N) * I3_ / (Z_ * Z_);
}

}  // namespace moran
