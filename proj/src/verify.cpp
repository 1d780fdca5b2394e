#include "moran/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numeric>

#include "moran/analytic.hpp"
#include "moran/count_sim.hpp"
#include "moran/lineage_count.hpp"
#include "moran/moran_sim.hpp"
#include "moran/reference.hpp"
#include "moran/stats.hpp"

namespace moran {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

class Timer {
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();

 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Linear interpolation of the rightmost downward 1/2 crossing.
double field_front(const LatticeField& f) {
  for (size_t i = f.u.size() - 1; i > 0; --i)
    if (f.u[i - 1] >= 0.5 && f.u[i] < 0.5)
      return f.x_of(i - 1) + (f.u[i - 1] - 0.5) / (f.u[i - 1] - f.u[i]) / f.n;
  return f.x_of(0);
}

double snapshot_front(const Snapshot& s, int n) {
  for (size_t i = s.p.size(); i > 0; --i)
    if (s.p[i - 1] >= 0.5) return double(s.lo + int32_t(i - 1)) / n;
  throw sim_error("snapshot_front: no site with p >= 1/2");
}

/// KS distance for lattice-valued samples against a continuous CDF,
/// evaluated at the cell boundaries v +- halfwidth so the within-cell jump
/// of the empirical CDF is not itself scored as a discrepancy.
double ks_lattice(std::vector<double> sample,
                  const std::function<double(double)>& cdf, double halfwidth) {
  std::sort(sample.begin(), sample.end());
  const double n = double(sample.size());
  double D = 0.0;
  size_t i = 0;
  while (i < sample.size()) {
    size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    D = std::max(D, std::abs(double(i) / n - cdf(sample[i] - halfwidth)));
    D = std::max(D, std::abs(double(j) / n - cdf(sample[i] + halfwidth)));
    i = j;
  }
  return D;
}

/// Ancestor site of an arena path at forward time tf (steps are most recent
/// first with decreasing birth times).
const AncestryRecorder::PathStep& step_at_forward(
    const std::vector<AncestryRecorder::PathStep>& path, double tf) {
  for (const auto& s : path)
    if (s.t_birth <= tf) return s;
  return path.back();
}

}  // namespace

CriterionResult criterion1_analytic(uint64_t) {
  Timer tm;
  CriterionResult res{1, "analytic identities", true, "", 0.0};
  const double tol_res = 1e-10, tol_int = 1e-8;
  double worst_res = 0.0, worst_pi = 0.0, worst_beta = 0.0;
  for (auto [alpha, m] : {std::pair{0.5, 2.0}, std::pair{0.9, 0.5}}) {
    auto p = derive_constants(2, 100, alpha, 1.0, m);
    // travelling-wave residual (m/2) g'' + nu g' + s0 f(g) on 1000 points,
    // with g'' = kappa^2 g (1-g) (1-2g)
    for (int i = 0; i < 1000; ++i) {
      double x = -12.0 + 24.0 * i / 999.0;
      double g = wave_profile(x, p.kappa);
      double gpp = p.kappa * p.kappa * g * (1.0 - g) * (1.0 - 2.0 * g);
      double r = 0.5 * p.m * gpp + p.nu * wave_profile_grad(x, p.kappa) +
                 p.s0 * reaction(g, p.alpha);
      worst_res = std::max(worst_res, std::abs(r));
    }
    AnalyticTables tab(p);
    double ipi = integrate([&](double x) { return tab.pi(x); }, tab.grid_lo(),
                           tab.grid_hi(), 1e-10);
    worst_pi = std::max(worst_pi, std::abs(ipi - 1.0));
    double beta = integrate(
        [&](double x) {
          double v = tab.pi(x);
          return v * v / wave_profile(x, p.kappa);
        },
        tab.grid_lo(), tab.grid_hi(), 1e-10);
    worst_beta = std::max(worst_beta, std::abs(tab.I3() / (tab.Z() * tab.Z()) - beta));
  }
  res.pass = worst_res < tol_res && worst_pi < tol_int && worst_beta < tol_int;
  res.detail = fmt("wave residual %.2e (<1e-10), |int pi - 1| %.2e (<1e-8), "
                   "|I3/Z^2 - int pi^2/g| %.2e (<1e-8)",
                   worst_res, worst_pi, worst_beta);
  res.seconds = tm.seconds();
  return res;
}

CriterionResult criterion2_pde_wave(uint64_t) {
  Timer tm;
  CriterionResult res{2, "deterministic wave convergence", true, "", 0.0};
  const double tol_speed = 0.02, tol_shape = 0.02;
  std::string parts;
  for (auto [alpha, m, s0] :
       {std::tuple{0.3, 2.0, 1.0}, std::tuple{0.5, 2.0, 1.0}, std::tuple{0.8, 1.0, 1.0}}) {
    auto p = derive_constants(8, 1000, alpha, s0, m);
    LatticeField u0;
    u0.n = p.n;
    u0.lo = -22 * p.n;
    u0.u.resize(size_t(50 * p.n + 1));
    for (size_t i = 0; i < u0.u.size(); ++i) {
      double x = u0.x_of(i);
      double v = wave_profile(x, p.kappa) +
                 0.12 * std::sin(1.7 * x) * std::exp(-x * x / 16.0);
      u0.u[i] = std::clamp(v, 0.0, 1.0);
    }
    u0.u.front() = 1.0;
    u0.u.back() = 0.0;
    double dt = 1.0 / (2.0 * p.m * p.n * p.n);
    auto traj = pde_solve(p, u0, 20.0, dt, 1.0);
    std::vector<std::pair<double, double>> pts;
    for (const auto& f : traj)
      if (f.time >= 8.0) pts.push_back({f.time, field_front(f)});
    auto fit = front_speed_fit(pts);
    const auto& last = traj.back();
    double shift = field_front(last);
    double err = 0.0;
    for (size_t i = 5; i + 5 < last.u.size(); ++i)
      err = std::max(err,
                     std::abs(last.u[i] - wave_profile(last.x_of(i) - shift, p.kappa)));
    bool ok = std::abs(fit.speed - p.nu) < tol_speed * p.nu && err < tol_shape;
    res.pass = res.pass && ok;
    parts += fmt("%s(a=%.1f,m=%.0f): speed %.4f vs nu %.4f, shape err %.4f",
                 parts.empty() ? "" : "; ", alpha, m, fit.speed, p.nu, err);
  }
  res.detail = parts + fmt(" (speed tol 2%%, shape tol %.2f)", tol_shape);
  res.seconds = tm.seconds();
  return res;
}

CriterionResult criterion3_sde_stationary(uint64_t seed) {
  Timer tm;
  CriterionResult res{3, "lineage diffusion stationary law", false, "", 0.0};
  auto p = derive_constants(4, 1000, 0.5, 1.0, 2.0);
  AnalyticTables tab(p);
  auto s = sde_stationary_sample(p, 0.0, 100.0, 1e-3, 100, 100000, seed);
  auto ks = ks_test(s, [&](double x) { return tab.pi_cdf(x); });
  res.pass = ks.D < 0.02;
  res.detail = fmt("KS D %.4f (<0.02) on 1e5 thinned Euler-Maruyama samples", ks.D);
  res.seconds = tm.seconds();
  return res;
}

CriterionResult criterion4_forward_vs_pde(uint64_t seed) {
  Timer tm;
  CriterionResult res{4, "forward simulator vs deterministic limit", false, "", 0.0};
  const int32_t wlo = -60, whi = 80;
  const double T = 5.0, cadence = 0.25;
  const int n_seeds = 20;
  std::vector<double> med;
  for (int N : {250, 1000, 4000}) {
    auto p = derive_constants(4, N, 0.5, 1.0, 2.0);
    std::vector<double> sups;
    for (int r = 0; r < n_seeds; ++r) {
      CounterRng init(seed + 131 * uint64_t(r));
      auto st = build_initial(p, wlo, whi, 0.0, init);
      LatticeField u0;
      u0.n = p.n;
      u0.lo = wlo;
      u0.u.resize(size_t(st.nsites()));
      for (int32_t s = wlo; s <= whi; ++s) u0.u[size_t(s - wlo)] = st.p(s);
      auto fields = pde_solve(p, u0, T, 1.0 / 64.0, cadence);
      RunOptions opt;
      opt.snapshot_cadence = cadence;
      auto rr = run(p, st, T, seed + 977 * uint64_t(r) + uint64_t(N), opt);
      double sup = 0.0;
      for (const auto& snap : rr.snapshots) {
        size_t fi = size_t(std::lround(snap.time / cadence));
        if (fi >= fields.size()) continue;
        const auto& f = fields[fi];
        for (size_t i = 0; i < snap.p.size(); ++i)
          sup = std::max(sup, std::abs(snap.p[i] - f.u[i]));
      }
      sups.push_back(sup);
    }
    med.push_back(median(sups));
  }
  res.pass = med[0] > med[1] && med[1] > med[2] && med[2] < 0.08;
  res.detail = fmt("median sup|p-u| over 20 seeds: N=250: %.4f, N=1000: %.4f, "
                   "N=4000: %.4f (monotone decreasing, last <0.08)",
                   med[0], med[1], med[2]);
  res.seconds = tm.seconds();
  return res;
}

CriterionResult criterion5_lineage_stationary(uint64_t seed, VerifyArtifacts* art) {
  Timer tm;
  CriterionResult res{5, "lineage position stationary density", false, "", 0.0};
  auto p = derive_constants(4, 2000, 0.5, 1.0, 2.0);
  AnalyticTables tab(p);
  const int32_t wlo = -88, whi = 160;
  const double T = 60.0, Tp = 40.0, K0 = 2.0;
  const int n_seeds = 10, per_seed = 50;

  std::vector<double> values;
  for (int r = 0; r < n_seeds; ++r) {
    CounterRng init(seed + 17 * uint64_t(r));
    auto st = build_initial(p, wlo, whi, 0.0, init);
    AncestryRecorder rec(st);
    RunOptions opt;
    opt.snapshot_cadence = 0.5;
    opt.recorder = &rec;
    auto rr = run(p, st, T, seed + 1009 * uint64_t(r), opt);
    double mu = kNegInf;
    for (const auto& s : rr.snapshots)
      if (std::abs(s.time - (T - Tp)) < 1e-9) mu = snapshot_front(s, p.n);
    if (mu == kNegInf) throw sim_error("criterion 5: missing snapshot at T - T'");

    CounterRng pick(seed + 4241 * uint64_t(r));
    auto slots = sample_near_front(st, K0, per_seed, pick);
    size_t base = art ? art->stat_paths.size() : 0;
    for (const auto& sl : slots) {
      auto path = rec.path_of(sl.first, sl.second);
      const auto& anc = step_at_forward(path, T - Tp);
      values.push_back(double(anc.site) / p.n - mu);
      if (art) art->stat_paths.push_back(std::move(path));
    }
    if (art) {
      // a handful of sampled pairs per seed for the merge-permanence checks
      for (int q = 0; q + 1 < per_seed; q += 10) {
        art->stat_pairs.push_back({base + size_t(q), base + size_t(q) + 1});
        art->stat_pair_tc.push_back(rec.pair_coalescence_forward_time(
            slots[size_t(q)].first, slots[size_t(q)].second,
            slots[size_t(q) + 1].first, slots[size_t(q) + 1].second));
      }
    }
  }
  double D = ks_lattice(values, [&](double x) { return tab.pi_cdf(x); },
                        0.5 / p.n);
  res.pass = D < 0.05;
  res.detail = fmt("KS D %.4f (<0.05), %zu lineage positions zeta - mu at "
                   "backward time %.0f vs stationary density",
                   D, values.size(), Tp);
  res.seconds = tm.seconds();
  return res;
}

CriterionResult criterion6_pair_coalescent(uint64_t seed, VerifyArtifacts* art) {
  Timer tm;
  CriterionResult res{6, "pair coalescent limit", false, "", 0.0};
  auto p = derive_constants(3, 1500, 0.9, 1.0, 0.5);
  AnalyticTables tab(p);
  const double lambda = tab.kingman_rate();
  const int32_t wlo = -90, whi = 29;
  const double T = 1030.0, horizon = 1000.0, K0 = 2.0;
  const int reps = 500, k0 = 4;

  std::vector<double> taus;
  int censored = 0, no_merger = 0;
  std::vector<long> pair_counts(6, 0);
  for (int r = 0; r < reps; ++r) {
    auto st = count_initial(p, wlo, whi, 0.0);
    auto rec = count_run(p, st, T, seed + 31 * uint64_t(r));
    CounterRng pick(seed + 7919 * uint64_t(r));
    auto sites = sample_band_count(p, rec.final_state, K0, k0, pick);
    auto tr = trace_count(p, rec, sites, horizon, seed + 104729 * uint64_t(r));
    if (tr.tau.at(0, 1))
      taus.push_back(*tr.tau.at(0, 1) * lambda);
    else
      ++censored;
    if (!tr.mergers.empty()) {
      int a = tr.mergers[0].b1, b = tr.mergers[0].b2;
      if (a > b) std::swap(a, b);
      // (0,1)(0,2)(0,3)(1,2)(1,3)(2,3)
      int idx = a == 0 ? b - 1 : a == 1 ? 2 + b - 2 + 1 : 5;
      ++pair_counts[size_t(idx)];
    } else {
      ++no_merger;
    }
    if (art) art->pair_taus.push_back(tr.tau);
  }
  auto ks = ks_test(taus, [](double x) { return 1.0 - std::exp(-x); });
  double cfrac = double(censored) / reps;
  long nm = reps - no_merger;
  double chi2 = 0.0;
  for (long c : pair_counts) {
    double e = double(nm) / 6.0;
    chi2 += (double(c) - e) * (double(c) - e) / e;
  }
  double chi2_p = gamma_q(2.5, chi2 / 2.0);
  res.pass = ks.p_value > 0.01 && cfrac < 0.05 && chi2_p > 0.01;
  res.detail = fmt("rescaled tau vs Exp(1): KS D %.4f p %.3f (>0.01), censored "
                   "%.1f%% (<5%%), first-merger chi2(5) %.2f p %.3f (>0.01), "
                   "Lambda %.5f",
                   ks.D, ks.p_value, 100.0 * cfrac, chi2, chi2_p, lambda);
  res.seconds = tm.seconds();
  return res;
}

namespace {

/// Small self-contained runs standing in for the criterion 5/6 artifacts
/// when criterion 7 is requested alone.
VerifyArtifacts make_mini_artifacts(uint64_t seed) {
  VerifyArtifacts art;
  auto p = derive_constants(2, 40, 0.5, 1.0, 1.0);
  CounterRng init(seed + 5);
  auto st = build_initial(p, -14, 14, 0.0, init);
  AncestryRecorder rec(st);
  RunOptions opt;
  opt.snapshot_cadence = 0.0;
  opt.recorder = &rec;
  run(p, st, 6.0, seed + 6, opt);
  CounterRng pick(seed + 7);
  auto slots = sample_near_front(st, 1.0, 20, pick);
  for (const auto& sl : slots) art.stat_paths.push_back(rec.path_of(sl.first, sl.second));
  for (size_t q = 0; q + 1 < slots.size(); q += 2) {
    art.stat_pairs.push_back({q, q + 1});
    art.stat_pair_tc.push_back(rec.pair_coalescence_forward_time(
        slots[q].first, slots[q].second, slots[q + 1].first, slots[q + 1].second));
  }
  for (int r = 0; r < 40; ++r) {
    auto cst = count_initial(p, -14, 14, 0.0);
    CountRunOptions cro;
    cro.allow_slide = false;
    auto crec = count_run(p, cst, 8.0, seed + 900 + uint64_t(r), cro);
    CounterRng cpick(seed + 950 + uint64_t(r));
    auto sites = sample_band_count(p, crec.final_state, 1.0, 4, cpick);
    art.pair_taus.push_back(
        trace_count(p, crec, sites, 8.0, seed + 990 + uint64_t(r)).tau);
  }
  return art;
}

}  // namespace

CriterionResult criterion7_tracer_exactness(uint64_t seed, const VerifyArtifacts* art) {
  Timer tm;
  CriterionResult res{7, "tracer exactness and path invariants", false, "", 0.0};
  long violations = 0;
  std::string first_bad;
  auto fail = [&](const std::string& what) {
    ++violations;
    if (first_bad.empty()) first_bad = what;
  };

  // --- exact ancestry partition on a fully logged run ---
  auto p = derive_constants(2, 50, 0.5, 1.0, 1.0);
  CounterRng init(seed + 1);
  auto st0 = build_initial(p, -16, 16, 0.0, init);
  const auto initial = st0;
  RunOptions opt;
  opt.filter = LogFilter::full;
  opt.snapshot_cadence = 0.0;
  auto rr = run(p, st0, 6.0, seed + 2, opt);

  CounterRng rng(seed + 3);
  int partitions = 0;
  long probes = 0;
  for (int c = 0; c < 100; ++c) {
    double t2 = 1.0 + 5.0 * rng.next_double();
    double t1 = (t2 - 0.2) * rng.next_double();
    PopulationState st = initial;
    replay(st, rr.log, t2);
    st.time = t2;
    // random occupied site
    int32_t x2 = 0;
    for (int tries = 0;; ++tries) {
      x2 = st.lo + int32_t(rng.next_below(uint32_t(st.nsites())));
      if (st.count(x2) > 0) break;
      if (tries > 1000) throw sim_error("criterion 7: no occupied site");
    }
    std::vector<Slot> samples;
    for (uint16_t i = 0; i < p.N; ++i)
      if (st.type(x2, i)) samples.push_back({x2, i});
    auto tr = trace(rr.log, t2, samples, t2 - t1, -16, 16);
    // partition identity: ancestor sites partition the a(x2) individuals
    std::vector<long> hist(size_t(st.nsites()) + 2, 0);
    for (const auto& path : tr.paths) {
      auto sl = path.at_backward(t2 - t1);
      ++hist[size_t(sl.first - (st.lo - 1))];
    }
    long total = std::accumulate(hist.begin(), hist.end(), 0L);
    if (total != st.count(x2)) fail(fmt("partition sum %ld != a(x2) %d", total, st.count(x2)));
    // and the tracer fraction agrees exactly, slot by slot, for 3 sites
    for (int probe = 0; probe < 3; ++probe) {
      int32_t x1 = st.lo + int32_t(rng.next_below(uint32_t(st.nsites())));
      double q = tracer_q(rr.log, st, t1, t2, x1, x2);
      if (q != double(hist[size_t(x1 - (st.lo - 1))]) / p.N)
        fail("tracer fraction mismatch");
    }
    ++partitions;

    // type-constancy probes: replayed ancestor slots must be type A
    if (c % 10 == 0) {
      for (const auto& path : tr.paths) {
        if (path.jumps.empty()) continue;
        double tb = (t2 - t1) * rng.next_double();
        auto sl = path.at_backward(tb);
        if (sl.first < st.lo || sl.first > st.hi) continue;  // virtual ancestor
        PopulationState probe_st = initial;
        replay(probe_st, rr.log, t2 - tb);
        if (!probe_st.type(sl.first, sl.second)) fail("ancestor slot is not type A");
        ++probes;
        break;
      }
    }
  }

  // --- structural invariants on the traced paths of criteria 5 and 6 ---
  VerifyArtifacts mini;
  if (!art) {
    mini = make_mini_artifacts(seed);
    art = &mini;
  }
  for (const auto& path : art->stat_paths) {
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      if (path[i].t_birth < path[i + 1].t_birth) fail("path birth times increase");
      if (std::abs(path[i].site - path[i + 1].site) > 1) fail("non-adjacent ancestor jump");
    }
  }
  long pair_probes = 0;
  for (size_t q = 0; q < art->stat_pairs.size(); ++q) {
    double tc = art->stat_pair_tc[q];
    if (tc == kNegInf) continue;
    const auto& a = art->stat_paths[art->stat_pairs[q].first];
    const auto& b = art->stat_paths[art->stat_pairs[q].second];
    for (int j = 0; j < 20; ++j) {
      double tf = tc * j / 20.0;
      const auto& sa = step_at_forward(a, tf);
      const auto& sb = step_at_forward(b, tf);
      if (sa.site != sb.site || sa.idx != sb.idx || sa.t_birth != sb.t_birth)
        fail("merged lineages diverge before their coalescence time");
      ++pair_probes;
    }
  }
  long triples = 0;
  for (const auto& tau : art->pair_taus) {
    for (int i = 0; i < tau.k; ++i)
      for (int j = i + 1; j < tau.k; ++j)
        for (int l = j + 1; l < tau.k; ++l) {
          if (!tau.at(i, j) || !tau.at(i, l) || !tau.at(j, l)) continue;
          double x = *tau.at(i, j), y = *tau.at(i, l), z = *tau.at(j, l);
          double hi1 = std::max({x, y, z});
          double hi2 = std::max(std::min(x, std::max(y, z)),
                                std::min(std::max(x, y), z));  // second largest
          if (hi1 != hi2) fail("coalescence times violate merge permanence");
          ++triples;
        }
  }

  res.pass = violations == 0;
  res.detail = fmt("%d exact ancestry partitions, %ld type probes, %ld merged-pair "
                   "probes, %ld tau triples; %ld violations%s%s",
                   partitions, probes, pair_probes, triples, violations,
                   violations ? ": " : "", first_bad.c_str());
  res.seconds = tm.seconds();
  return res;
}

CriterionResult criterion8_pair_counts(uint64_t seed) {
  Timer tm;
  CriterionResult res{8, "short-window common-ancestor counts", false, "", 0.0};
  auto p = derive_constants(5, 1000, 0.5, 1.0, 0.5);
  const double delta = DiagnosticsConfig::default_delta(p);
  const int32_t wlo = -60, whi = 60;
  const double t_start = 2.0, t_end = 3.5;

  std::vector<double> ratio_same, ratio_nb;
  for (int sd = 0; sd < 2 && int(ratio_same.size()) < 600; ++sd) {
    CounterRng init(seed + 11 * uint64_t(sd));
    auto st = build_initial(p, wlo, whi, 0.0, init);
    const auto initial = st;
    RunOptions opt;
    opt.filter = LogFilter::full;
    opt.snapshot_cadence = 0.0;
    auto rr = run(p, st, t_end, seed + 271 * uint64_t(sd), opt);

    PopulationState cur = initial;
    replay(cur, rr.log, t_start);
    cur.time = t_start;
    CounterRng rng(seed + 997 * uint64_t(sd));
    for (double t = t_start; t + delta <= t_end && int(ratio_same.size()) < 600;
         t += 2.0 * delta) {
      replay(cur, rr.log, t);
      cur.time = t;
      std::vector<int32_t> eligible;
      for (int32_t x = wlo + 5; x <= whi - 5; ++x)
        if (cur.p(x) >= 0.2 && cur.p(x) <= 0.8) eligible.push_back(x);
      if (eligible.empty()) continue;
      int32_t x = eligible[rng.next_below(uint32_t(eligible.size()))];
      double px = cur.p(x), pxr = cur.p(x + 1);
      PopulationState after = cur;
      replay(after, rr.log, t + delta);
      after.time = t + delta;
      long cs = pair_ancestor_counts(rr.log, after, t, delta, {x, x});
      long cn = pair_ancestor_counts(rr.log, after, t, delta, {x, x + 1});
      ratio_same.push_back(double(cs) / (p.n * p.n * p.N * delta * px));
      ratio_nb.push_back(double(cn) /
                         (p.m * p.n * p.n * p.N * delta * 0.5 * (px + pxr)));
      cur = after;
    }
  }
  double ms = std::accumulate(ratio_same.begin(), ratio_same.end(), 0.0) /
              double(ratio_same.size());
  double mn = std::accumulate(ratio_nb.begin(), ratio_nb.end(), 0.0) /
              double(ratio_nb.size());
  res.pass = ratio_same.size() >= 500 && ms > 0.9 && ms < 1.1 && mn > 0.9 && mn < 1.1;
  res.detail = fmt("%zu windows: same-site mean ratio %.4f, neighbour mean ratio "
                   "%.4f (both in [0.9,1.1])",
                   ratio_same.size(), ms, mn);
  res.seconds = tm.seconds();
  return res;
}

CriterionResult criterion9_kingman_reference(uint64_t seed) {
  Timer tm;
  CriterionResult res{9, "coalescent reference sampler", false, "", 0.0};
  const int reps = 100000;
  double s2 = 0, ss2 = 0, s3 = 0, ss3 = 0;
  for (int r = 0; r < reps; ++r) {
    double t2 = kingman_sample(2, seed + uint64_t(r)).tau_at(0, 1);
    s2 += t2;
    ss2 += t2 * t2;
    double t3 = kingman_sample(3, seed + 7 * reps + uint64_t(r)).mergers[0].time;
    s3 += t3;
    ss3 += t3 * t3;
  }
  double m2 = s2 / reps, se2 = std::sqrt((ss2 / reps - m2 * m2) / reps);
  double m3 = s3 / reps, se3 = std::sqrt((ss3 / reps - m3 * m3) / reps);
  res.pass = std::abs(m2 - 1.0) < 3.0 * se2 && std::abs(m3 - 1.0 / 3.0) < 3.0 * se3;
  res.detail = fmt("pair time mean %.4f (1 +- %.4f), k=3 first merger mean %.4f "
                   "(0.3333 +- %.4f)",
                   m2, 3.0 * se2, m3, 3.0 * se3);
  res.seconds = tm.seconds();
  return res;
}

std::vector<CriterionResult> run_criteria(std::vector<int> ids, uint64_t seed,
                                          double budget_seconds) {
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  // criterion 7 consumes the paths traced by 5 and 6; run it last
  std::stable_partition(ids.begin(), ids.end(), [](int i) { return i != 7; });

  VerifyArtifacts art;
  bool have_art = false;
  Timer tm;
  std::vector<CriterionResult> out;
  for (int id : ids) {
    if (budget_seconds > 0.0 && tm.seconds() > budget_seconds) {
      out.push_back({id, "skipped", false,
                     fmt("time budget %.0f s exhausted", budget_seconds), 0.0});
      continue;
    }
    switch (id) {
      case 1: out.push_back(criterion1_analytic(seed)); break;
      case 2: out.push_back(criterion2_pde_wave(seed)); break;
      case 3: out.push_back(criterion3_sde_stationary(seed)); break;
      case 4: out.push_back(criterion4_forward_vs_pde(seed)); break;
      case 5:
        out.push_back(criterion5_lineage_stationary(seed, &art));
        have_art = true;
        break;
      case 6:
        out.push_back(criterion6_pair_coalescent(seed, &art));
        have_art = true;
        break;
      case 7:
        out.push_back(criterion7_tracer_exactness(seed, have_art ? &art : nullptr));
        break;
      case 8: out.push_back(criterion8_pair_counts(seed)); break;
      case 9: out.push_back(criterion9_kingman_reference(seed)); break;
      default:
        throw domain_error("run_criteria: criterion ids are 1..9");
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return out;
}

}  // namespace moran
