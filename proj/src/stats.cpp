#include "moran/stats.hpp"

#include <algorithm>
#include <cmath>

#include "moran/analytic.hpp"

namespace moran {

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 200; ++j) {
    double term = std::exp(-2.0 * j * j * lambda * lambda);
    if (term < 1e-12) break;
    sum += (j % 2 ? term : -term);
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double D, double n_eff) {
  // Stephens' small-sample correction to the asymptotic distribution
  double s = std::sqrt(n_eff);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * D);
}

}  // namespace

KSResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& reference_cdf) {
  if (sample.empty()) throw domain_error("ks_test: empty sample");
  std::sort(sample.begin(), sample.end());
  const size_t n = sample.size();
  double D = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double F = reference_cdf(sample[i]);
    D = std::max(D, std::abs(F - double(i) / n));
    D = std::max(D, std::abs(F - double(i + 1) / n));
  }
  return KSResult{D, n, ks_p_value(D, double(n))};
}

KSResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw domain_error("ks_test_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double D = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    // advance both walks past the smaller value (and all ties on both sides)
    // before evaluating the gap, so tied points never inflate D
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    D = std::max(D, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  double n_eff = double(a.size()) * b.size() / double(a.size() + b.size());
  return KSResult{D, a.size() + b.size(), ks_p_value(D, n_eff)};
}

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw domain_error("gamma_q: need x >= 0, a > 0");
  if (x == 0.0) return 1.0;
  double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // lower series
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
  }
  // upper continued fraction (modified Lentz)
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - lg);
}

LineFit front_speed_fit(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw domain_error("front_speed_fit: need >= 2 points");
  double st = 0, sm = 0, stt = 0, stm = 0;
  for (auto& [t, mu] : pts) {
    st += t;
    sm += mu;
    stt += t * t;
    stm += t * mu;
  }
  double nn = double(pts.size());
  double det = nn * stt - st * st;
  if (std::abs(det) < 1e-300 * std::max(1.0, stt))
    throw domain_error("front_speed_fit: degenerate times");
  LineFit fit;
  fit.speed = (nn * stm - st * sm) / det;
  fit.intercept = (sm - fit.speed * st) / nn;
  double ss = 0;
  for (auto& [t, mu] : pts) {
    double r = mu - fit.intercept - fit.speed * t;
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / nn);
  return fit;
}

double profile_error(const Snapshot& snap, double center, const ModelParams& p) {
  double err = 0.0;
  const size_t M = snap.p.size();
  for (size_t i = 5; i + 5 < M; ++i) {
    double x = double(snap.lo + int32_t(i)) / p.n;
    err = std::max(err, std::abs(snap.p[i] - wave_profile(x - center, p.kappa)));
  }
  return err;
}

RescaledTaus coalescent_rescale(const CoalescenceMatrix& tau, double rate_constant) {
  RescaledTaus out;
  size_t total = 0, censored = 0;
  for (int i = 0; i < tau.k; ++i)
    for (int j = i + 1; j < tau.k; ++j) {
      ++total;
      if (tau.at(i, j))
        out.values.push_back(*tau.at(i, j) * rate_constant);
      else
        ++censored;
    }
  if (total == 0 || out.values.empty())
    throw domain_error("coalescent_rescale: no uncensored coalescence times");
  out.censoring_fraction = double(censored) / double(total);
  return out;
}

}  // namespace moran
