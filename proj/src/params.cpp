#include "moran/params.hpp"

#include <cmath>

namespace moran {

ModelParams derive_constants(int n, int N, double alpha, double s0, double m) {
  if (n < 1) throw domain_error("n must be >= 1 (got " + std::to_string(n) + ")");
  if (N < 2) throw domain_error("N must be >= 2 (got " + std::to_string(N) + ")");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw domain_error("alpha must lie in (0,1); the pulled regime alpha >= 1 is unsupported (got " +
                       std::to_string(alpha) + ")");
  if (!(s0 > 0.0)) throw domain_error("s0 must be > 0 (got " + std::to_string(s0) + ")");
  if (!(m > 0.0)) throw domain_error("m must be > 0 (got " + std::to_string(m) + ")");

  ModelParams p;
  p.n = n;
  p.N = N;
  p.alpha = alpha;
  p.s0 = s0;
  p.m = m;
  p.s_n = 2.0 * s0 / (double(n) * n);
  p.r_n = double(n) * n / (2.0 * N);
  p.kappa = std::sqrt(2.0 * s0 / m);
  p.nu = alpha * std::sqrt(m * s0 / 2.0);

  if (!((alpha + 1.0) * p.s_n < 1.0))
    throw domain_error("(alpha+1)*s_n must be < 1 so the neutral-class rate stays positive (got " +
                       std::to_string((alpha + 1.0) * p.s_n) + ")");
  return p;
}

}  // namespace moran
