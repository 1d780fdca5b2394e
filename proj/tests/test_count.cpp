#include <cmath>
#include <numeric>

#include "doctest.h"
#include "moran/analytic.hpp"
#include "moran/count_sim.hpp"
#include "moran/lineage.hpp"
#include "moran/lineage_count.hpp"
#include "moran/moran_sim.hpp"
#include "moran/stats.hpp"

using namespace moran;

TEST_CASE("count_site_rate matches the closed form by hand") {
  auto p = derive_constants(2, 10, 0.5, 0.5, 1.0);
  // s_n = 0.25, r_n = 0.2; a=4, al=10 (bulk), ar=0:
  //   up_local  = 0.2*6*4*(1 - 0.25 + 3*0.025)        = 3.96
  //   up_migL   = 0.2*6*10                            = 12
  //   down_local= 0.2*4*6*(1 - 1.5*0.25 + 5*0.025)    = 3.6
  //   down_migR = 0.2*4*10                            = 8
  CHECK(count_site_rate(p, 4, 10, 0) == doctest::Approx(27.56).epsilon(1e-12));
  // monomorphic with matching neighbours: nothing can happen
  CHECK(count_site_rate(p, 10, 10, 10) == doctest::Approx(0.0));
  CHECK(count_site_rate(p, 0, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("count_initial mirrors the label initializer profile") {
  auto p = derive_constants(2, 30, 0.5, 1.0, 1.0);
  auto st = count_initial(p, -16, 16, 0.0);
  CHECK(st.wlo == -16);
  CHECK(st.a.front() == 30);
  CHECK(st.a.back() == 0);
  for (size_t i = 0; i < st.a.size(); ++i) {
    double x = double(st.wlo + int32_t(i)) / p.n;
    CHECK(st.a[i] == int32_t(std::lround(30 * wave_profile(x, p.kappa))));
  }
  CHECK_THROWS_AS(count_initial(p, -2, 2, 0.0), domain_error);
}

TEST_CASE("count_run is deterministic and conserves 0 <= a <= N") {
  auto p = derive_constants(2, 25, 0.5, 1.0, 1.0);
  auto st = count_initial(p, -20, 20, 0.0);
  auto r1 = count_run(p, st, 3.0, 99);
  auto r2 = count_run(p, st, 3.0, 99);
  REQUIRE(r1.events.size() == r2.events.size());
  for (size_t i = 0; i < r1.events.size(); ++i) {
    CHECK(r1.events[i].t == r2.events[i].t);
    CHECK(r1.events[i].site == r2.events[i].site);
    CHECK(r1.events[i].delta == r2.events[i].delta);
    CHECK(r1.events[i].parent_off == r2.events[i].parent_off);
  }
  for (int32_t a : r1.final_state.a) {
    CHECK(a >= 0);
    CHECK(a <= 25);
  }
  CHECK(r1.final_state.time == doctest::Approx(3.0));
}

TEST_CASE("count_rewind exactly undoes a run with window slides") {
  auto p = derive_constants(2, 25, 0.5, 1.0, 1.0);
  auto st = count_initial(p, -20, 24, 0.0);
  auto rec = count_run(p, st, 12.0, 3);
  // the front travels ~ nu*T ~ 4 space units; with margin 8 on a 45-site
  // window slides must have occurred
  bool slid = false;
  for (const auto& e : rec.events) slid = slid || e.delta == 0;
  CHECK(slid);
  auto back = count_rewind(p, rec);
  CHECK(back.wlo == rec.initial.wlo);
  CHECK(back.time == rec.initial.time);
  REQUIRE(back.a.size() == rec.initial.a.size());
  for (size_t i = 0; i < back.a.size(); ++i) CHECK(back.a[i] == rec.initial.a[i]);
}

TEST_CASE("short-time count drift matches s0 N f + discrete diffusion") {
  auto p = derive_constants(2, 40, 0.6, 1.0, 1.0);
  auto st = count_initial(p, -16, 16, 0.0);
  const int32_t probe = 2;  // x = 1, well inside the front
  const size_t pi_ = size_t(probe - st.wlo);
  double u = double(st.a[pi_]) / p.N;
  double ul = double(st.a[pi_ - 1]) / p.N, ur = double(st.a[pi_ + 1]) / p.N;
  double drift = p.N * (p.s0 * reaction(u, p.alpha) +
                        0.5 * p.m * p.n * p.n * (ul + ur - 2.0 * u));
  const double t = 0.02;
  const int reps = 4000;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    auto rec = count_run(p, st, t, 500 + uint64_t(r));
    double d = double(rec.final_state.a[pi_] - st.a[pi_]) / t;
    sum += d;
    sumsq += d * d;
  }
  double mean = sum / reps;
  double se = std::sqrt((sumsq / reps - mean * mean) / reps);
  CHECK(std::abs(mean - drift) < 4.0 * se + 0.1 * std::abs(drift) * t / 0.02);
}

namespace {

const ModelParams& xval_params() {
  static ModelParams p = derive_constants(2, 30, 0.5, 1.0, 1.0);
  return p;
}

}  // namespace

TEST_CASE("count chain and label chain agree on the count marginal") {
  const auto& p = xval_params();
  const int32_t wlo = -12, whi = 16, probe = 2;
  const double T = 3.0;
  const int reps = 1500;
  std::vector<double> label_a, count_a;
  for (int r = 0; r < reps; ++r) {
    CounterRng init_rng(7000 + uint64_t(r));
    auto st = build_initial(p, wlo, whi, 0.0, init_rng);
    RunOptions opt;
    opt.snapshot_cadence = 0.0;
    run(p, st, T, 40000 + uint64_t(r), opt);
    label_a.push_back(double(st.count(probe)));

    auto cst = count_initial(p, wlo, whi, 0.0);
    CountRunOptions copt;
    copt.allow_slide = false;  // match the label engine's fixed pinned window
    auto rec = count_run(p, cst, T, 80000 + uint64_t(r), copt);
    count_a.push_back(double(rec.final_state.a[size_t(probe - wlo)]));
  }
  double ml = std::accumulate(label_a.begin(), label_a.end(), 0.0) / reps;
  double mc = std::accumulate(count_a.begin(), count_a.end(), 0.0) / reps;
  double vl = 0, vc = 0;
  for (double v : label_a) vl += (v - ml) * (v - ml);
  for (double v : count_a) vc += (v - mc) * (v - mc);
  double se = std::sqrt((vl + vc) / (double(reps) * reps));
  CHECK(std::abs(ml - mc) < 4.0 * se);
  CHECK(ks_test_two_sample(label_a, count_a).p_value > 1e-3);
}

TEST_CASE("single-lineage law: conditional count sampler vs label tracer") {
  const auto& p = xval_params();
  const int32_t wlo = -12, whi = 16;
  const double T = 4.0, horizon = 2.0, K0 = 1.0;
  const int reps = 1200;
  std::vector<double> zeta_label, zeta_count;
  for (int r = 0; r < reps; ++r) {
    CounterRng init_rng(1000 + uint64_t(r));
    auto st = build_initial(p, wlo, whi, 0.0, init_rng);
    RunOptions opt;
    opt.filter = LogFilter::a_parent_only;
    opt.snapshot_cadence = 0.0;
    opt.log_t_min = T - horizon;
    auto rr = run(p, st, T, 91000 + uint64_t(r), opt);
    CounterRng pick(61000 + uint64_t(r));
    auto slots = sample_near_front(st, K0, 1, pick);
    auto tr = trace(rr.log, T, slots, horizon, wlo, whi, T - horizon);
    zeta_label.push_back(double(tr.paths[0].at_backward(horizon).first) / p.n);

    auto cst = count_initial(p, wlo, whi, 0.0);
    CountRunOptions cro;
    cro.allow_slide = false;
    auto rec = count_run(p, cst, T, 95000 + uint64_t(r), cro);
    CounterRng cpick(65000 + uint64_t(r));
    auto sites = sample_band_count(p, rec.final_state, K0, 1, cpick);
    CountTraceOptions copt;
    copt.checkpoints = {horizon};
    auto ct = trace_count(p, rec, sites, horizon, 71000 + uint64_t(r), copt);
    zeta_count.push_back(double(ct.sites_at[0][0]) / p.n);
  }
  CHECK(ks_test_two_sample(zeta_label, zeta_count).p_value > 1e-3);
}

TEST_CASE("pair coalescence law: conditional count sampler vs label tracer") {
  const auto& p = xval_params();
  const int32_t wlo = -12, whi = 16;
  const double T = 5.0, horizon = 4.0, K0 = 1.0;
  const int reps = 1200;
  std::vector<double> tau_label, tau_count;
  int cens_label = 0, cens_count = 0;
  for (int r = 0; r < reps; ++r) {
    CounterRng init_rng(2000 + uint64_t(r));
    auto st = build_initial(p, wlo, whi, 0.0, init_rng);
    RunOptions opt;
    opt.filter = LogFilter::a_parent_only;
    opt.snapshot_cadence = 0.0;
    opt.log_t_min = T - horizon;
    auto rr = run(p, st, T, 31000 + uint64_t(r), opt);
    CounterRng pick(21000 + uint64_t(r));
    auto slots = sample_near_front(st, K0, 2, pick);
    auto tr = trace(rr.log, T, slots, horizon, wlo, whi, T - horizon);
    if (tr.tau.at(0, 1))
      tau_label.push_back(*tr.tau.at(0, 1));
    else
      ++cens_label;

    auto cst = count_initial(p, wlo, whi, 0.0);
    CountRunOptions cro;
    cro.allow_slide = false;
    auto rec = count_run(p, cst, T, 35000 + uint64_t(r), cro);
    CounterRng cpick(25000 + uint64_t(r));
    auto sites = sample_band_count(p, rec.final_state, K0, 2, cpick);
    auto ct = trace_count(p, rec, sites, horizon, 11000 + uint64_t(r));
    if (ct.tau.at(0, 1))
      tau_count.push_back(*ct.tau.at(0, 1));
    else
      ++cens_count;
  }
  // censoring fractions agree within 4 binomial SEs
  double fl = double(cens_label) / reps, fc = double(cens_count) / reps;
  double fse = std::sqrt((fl * (1 - fl) + fc * (1 - fc)) / reps);
  CHECK(std::abs(fl - fc) < 4.0 * std::max(fse, 1e-3));
  CHECK(ks_test_two_sample(tau_label, tau_count).p_value > 1e-3);
}

TEST_CASE("lineage in the all-A bulk diffuses with variance m t") {
  auto p = derive_constants(2, 50, 0.5, 1.0, 1.0);
  CountRecord rec;
  rec.initial.wlo = -40;
  rec.initial.a.assign(81, 50);
  rec.final_state = rec.initial;
  rec.final_state.time = 5.0;

  CountTraceOptions opt;
  opt.checkpoints = {2.0, 5.0};
  const int reps = 3000;
  double s2 = 0, s5 = 0, ss2 = 0, ss5 = 0;
  for (int r = 0; r < reps; ++r) {
    auto ct = trace_count(p, rec, {0}, 5.0, 300 + uint64_t(r), opt);
    double d2 = double(ct.sites_at[0][0]) / p.n;
    double d5 = double(ct.sites_at[1][0]) / p.n;
    s2 += d2;
    s5 += d5;
    ss2 += d2 * d2;
    ss5 += d5 * d5;
  }
  double var2 = ss2 / reps - (s2 / reps) * (s2 / reps);
  double var5 = ss5 / reps - (s5 / reps) * (s5 / reps);
  CHECK(std::abs(s2 / reps) < 0.1);
  CHECK(var2 == doctest::Approx(p.m * 2.0).epsilon(0.12));
  CHECK(var5 == doctest::Approx(p.m * 5.0).epsilon(0.12));
}

TEST_CASE("trace_count input validation") {
  auto p = derive_constants(2, 25, 0.5, 1.0, 1.0);
  auto st = count_initial(p, -16, 16, 0.0);
  auto rec = count_run(p, st, 2.0, 5);
  CHECK_THROWS_AS(trace_count(p, rec, {0}, 3.0, 1), domain_error);  // horizon > span
  CHECK_THROWS_AS(trace_count(p, rec, {16, 16}, 1.0, 1), domain_error);  // empty deme
  CHECK_THROWS_AS(trace_count(p, rec, {}, 1.0, 1), domain_error);
  CountTraceOptions opt;
  opt.checkpoints = {1.5};
  CHECK_THROWS_AS(trace_count(p, rec, {0}, 1.0, 1, opt), domain_error);
  auto ok = trace_count(p, rec, {0, 0}, 1.5, 1);
  CHECK(ok.tau.k == 2);
}
