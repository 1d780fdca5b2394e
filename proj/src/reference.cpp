#include "moran/reference.hpp"

#include <algorithm>
#include <cmath>

#include "moran/analytic.hpp"

namespace moran {

namespace {

void check_stability(const ModelParams& p, double dt) {
  double bound = 1.0 / (2.0 * p.m * p.n * p.n);
  if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12))
    throw domain_error("explicit Euler requires 0 < dt <= 1/(2 m n^2) = " +
                       std::to_string(bound));
}

}  // namespace

std::vector<LatticeField> pde_solve(const ModelParams& p, const LatticeField& u0,
                                    double T, double dt, double cadence) {
  check_stability(p, dt);
  const size_t M = u0.u.size();
  const double lap = 0.5 * p.m * double(p.n) * p.n;

  std::vector<LatticeField> out;
  LatticeField cur = u0;
  cur.n = p.n;
  out.push_back(cur);
  double next_emit = cadence > 0 ? u0.time + cadence : T + u0.time + 1.0;

  std::vector<double> next(M);
  // Dirichlet ghosts frozen at the initial edge values (1 and 0 for a
  // front-like profile spanning the window)
  const double u_left = u0.u.front(), u_right = u0.u.back();
  long steps = std::lround(std::ceil(T / dt - 1e-9));
  for (long s = 0; s < steps; ++s) {
    for (size_t i = 0; i < M; ++i) {
      double left = i == 0 ? u_left : cur.u[i - 1];
      double right = i == M - 1 ? u_right : cur.u[i + 1];
      next[i] = cur.u[i] + dt * (lap * (left - 2.0 * cur.u[i] + right) +
                                 p.s0 * reaction(cur.u[i], p.alpha));
    }
    cur.u.swap(next);
    cur.time += dt;
    if (cur.time + 1e-12 >= next_emit) {
      out.push_back(cur);
      next_emit += cadence;
    }
  }
  if (out.back().time < cur.time) out.push_back(cur);
  return out;
}

std::vector<LatticeField> tracer_pde_solve(const ModelParams& p,
                                           const LatticeField& v0,
                                           const LatticeField& u0, double T,
                                           double dt, double cadence) {
  check_stability(p, dt);
  if (v0.u.size() != u0.u.size() || v0.lo != u0.lo)
    throw domain_error("tracer_pde_solve: v0 and u0 grids differ");
  const size_t M = u0.u.size();
  const double lap = 0.5 * p.m * double(p.n) * p.n;

  std::vector<LatticeField> out;
  LatticeField u = u0, v = v0;
  v.n = p.n;
  out.push_back(v);
  double next_emit = cadence > 0 ? v0.time + cadence : T + v0.time + 1.0;

  std::vector<double> un(M), vn(M);
  const double u_left = u0.u.front(), u_right = u0.u.back();
  const double v_left = v0.u.front(), v_right = v0.u.back();
  long steps = std::lround(std::ceil(T / dt - 1e-9));
  for (long s = 0; s < steps; ++s) {
    for (size_t i = 0; i < M; ++i) {
      double ul = i == 0 ? u_left : u.u[i - 1];
      double ur = i == M - 1 ? u_right : u.u[i + 1];
      double vl = i == 0 ? v_left : v.u[i - 1];
      double vr = i == M - 1 ? v_right : v.u[i + 1];
      double ui = u.u[i], vi = v.u[i];
      un[i] = ui + dt * (lap * (ul - 2.0 * ui + ur) + p.s0 * reaction(ui, p.alpha));
      vn[i] = vi + dt * (lap * (vl - 2.0 * vi + vr) +
                         p.s0 * vi * (1.0 - ui) * (2.0 * ui - 1.0 + p.alpha));
    }
    u.u.swap(un);
    v.u.swap(vn);
    u.time += dt;
    v.time += dt;
    if (v.time + 1e-12 >= next_emit) {
      out.push_back(v);
      next_emit += cadence;
    }
  }
  if (out.back().time < v.time) out.push_back(v);
  return out;
}

std::vector<double> sde_simulate(const ModelParams& p, double z0, double T,
                                 double dt, uint64_t seed) {
  if (!(dt > 0.0)) throw domain_error("sde_simulate: need dt > 0");
  CounterRng rng(seed);
  long steps = std::lround(std::ceil(T / dt - 1e-9));
  std::vector<double> path;
  path.reserve(size_t(steps) + 1);
  double z = z0;
  path.push_back(z);
  const double sq = std::sqrt(p.m * dt);
  for (long s = 0; s < steps; ++s) {
    double drift = p.nu - p.m * p.kappa * (1.0 - wave_profile(z, p.kappa));
    z += drift * dt + sq * rng.next_normal();
    path.push_back(z);
  }
  return path;
}

std::vector<double> sde_stationary_sample(const ModelParams& p, double z0,
                                          double burn_in, double dt, int thin,
                                          int n_samples, uint64_t seed) {
  CounterRng rng(seed);
  double z = z0;
  const double sq = std::sqrt(p.m * dt);
  auto step = [&] {
    double drift = p.nu - p.m * p.kappa * (1.0 - wave_profile(z, p.kappa));
    z += drift * dt + sq * rng.next_normal();
  };
  long burn_steps = std::lround(std::ceil(burn_in / dt));
  for (long s = 0; s < burn_steps; ++s) step();
  std::vector<double> out;
  out.reserve(size_t(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    for (int j = 0; j < thin; ++j) step();
    out.push_back(z);
  }
  return out;
}

KingmanResult kingman_sample(int k, uint64_t seed) {
  if (k < 2) throw domain_error("kingman_sample: need k >= 2");
  CounterRng rng(seed);
  KingmanResult res;
  res.k = k;
  res.tau.assign(size_t(k) * k, 0.0);

  std::vector<std::vector<int>> blocks(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) blocks[size_t(i)] = {i};

  double t = 0.0;
  while (blocks.size() > 1) {
    double j = double(blocks.size());
    t += rng.next_exp(j * (j - 1) / 2.0);
    // uniform ordered pair of distinct blocks
    uint32_t b1 = rng.next_below(uint32_t(blocks.size()));
    uint32_t b2 = rng.next_below(uint32_t(blocks.size() - 1));
    if (b2 >= b1) ++b2;
    if (b1 > b2) std::swap(b1, b2);
    for (int a : blocks[b1])
      for (int b : blocks[b2]) {
        res.tau[size_t(a) * k + b] = t;
        res.tau[size_t(b) * k + a] = t;
      }
    res.mergers.push_back(KingmanResult::Merger{
        t, *std::min_element(blocks[b1].begin(), blocks[b1].end()),
        *std::min_element(blocks[b2].begin(), blocks[b2].end())});
    blocks[b1].insert(blocks[b1].end(), blocks[b2].begin(), blocks[b2].end());
    blocks.erase(blocks.begin() + b2);
  }
  return res;
}

}  // namespace moran
