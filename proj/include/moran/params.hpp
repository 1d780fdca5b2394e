#ifndef MORAN_PARAMS_HPP
#define MORAN_PARAMS_HPP

#include <stdexcept>
#include <string>

namespace moran {

/// Raw model inputs plus every derived constant used by the other modules.
/// Immutable after construction; safe to share across threads.
struct ModelParams {
  // raw
  int n = 1;           // lattice refinement: sites per unit length
  int N = 2;           // individuals per deme
  double alpha = 0.5;  // selection asymmetry, in (0,1)
  double s0 = 1.0;     // selection strength
  double m = 1.0;      // migration strength

  // derived
  double s_n = 0.0;    // 2*s0/n^2, per-event selection probability
  double r_n = 0.0;    // n^2/(2N), event time-scale rate
  double kappa = 0.0;  // sqrt(2*s0/m), inverse wave width
  double nu = 0.0;     // alpha*sqrt(m*s0/2), wavespeed

  double dx() const { return 1.0 / n; }
};

class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Validates the raw inputs and computes all derived constants.
/// Throws moran::domain_error naming the violated bound.
ModelParams derive_constants(int n, int N, double alpha, double s0, double m);

}  // namespace moran

#endif
