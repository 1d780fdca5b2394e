#include <cmath>
#include <sstream>

#include "doctest.h"
#include "moran/moran_sim.hpp"

using namespace moran;

namespace {

PopulationState uniform_state(const ModelParams& p, int32_t lo, int32_t hi, int a,
                              BoundaryMode b) {
  PopulationState st;
  st.n = p.n;
  st.N = p.N;
  st.lo = lo;
  st.hi = hi;
  st.boundary = b;
  st.types.assign(size_t(st.nsites()) * p.N, 0);
  st.counts.assign(size_t(st.nsites()), a);
  for (int32_t s = lo; s <= hi; ++s)
    for (int i = 0; i < a; ++i) st.type(s, i) = 1;
  return st;
}

}  // namespace

TEST_CASE("build_initial produces the rounded-profile counts") {
  auto p = derive_constants(2, 10, 0.5, 1.0, 2.0);  // kappa = 1
  CounterRng rng(1);
  auto st = build_initial(p, -40, 40, 0.0, rng);
  // counts are deterministic; labels are the only randomness
  for (int32_t s = st.lo; s <= st.hi; ++s) {
    double g = 1.0 / (1.0 + std::exp(st.x_of(s)));
    CHECK(st.count(s) == int(std::lround(g * p.N)));
    int recount = 0;
    for (int i = 0; i < p.N; ++i) recount += st.type(s, i);
    CHECK(recount == st.count(s));
  }
  CHECK(st.count(0) == p.N / 2);
  // site beyond kappa^{-1} log(2N) rounds to zero
  CHECK(st.count(int32_t(std::ceil(std::log(2.0 * p.N) * p.n)) + 1) == 0);
  CHECK_THROWS_AS(build_initial(p, -2, 2, 0.0, rng), domain_error);
}

TEST_CASE("front_position is the rightmost p >= 1/2 site") {
  auto p = derive_constants(2, 10, 0.5, 1.0, 2.0);
  CounterRng rng(2);
  auto st = build_initial(p, -40, 40, 0.0, rng);
  double mu = front_position(st);
  CHECK(mu >= -1.0);
  CHECK(mu <= 1.0);
  auto st2 = build_initial(p, -40, 40, 3.5, rng);
  CHECK(front_position(st2) == doctest::Approx(front_position(st) + 3.5));
  auto empty = uniform_state(p, 0, 10, 0, BoundaryMode::closed);
  CHECK_THROWS_AS(front_position(empty), sim_error);
  auto full = uniform_state(p, 0, 10, p.N, BoundaryMode::closed);
  CHECK(front_position(full) == full.x_of(10));
}

TEST_CASE("rate cap and T=0 run") {
  auto p = derive_constants(3, 100, 0.7, 1.0, 1.5);
  CHECK(site_event_rate(p) <= 0.5 * p.N * p.n * p.n * (1.0 + 2.0 * p.m) + 1e-9);
  CounterRng rng(3);
  auto st = build_initial(p, -60, 60, 0.0, rng);
  auto before = st.types;
  RunOptions opt;
  opt.filter = LogFilter::full;
  auto res = run(p, st, 0.0, 42, opt);
  CHECK(res.log.empty());
  CHECK(res.snapshots.size() == 1);
  CHECK(st.types == before);
}

TEST_CASE("all-a isolated deme stays empty and logs no A parents") {
  auto p = derive_constants(2, 20, 0.5, 0.5, 1.0);
  auto st = uniform_state(p, 0, 0, 0, BoundaryMode::closed);
  RunOptions opt;
  opt.filter = LogFilter::full;
  opt.escape_guard = false;
  auto res = run(p, st, 5.0, 7, opt);
  CHECK(st.count(0) == 0);
  for (const auto& e : res.log.events()) {
    CHECK(e.cls != EventClass::R);
    CHECK(st.type(e.px, e.pi) == 0);
  }
  // and with the A-parent filter nothing at all is logged
  auto st2 = uniform_state(p, 0, 0, 0, BoundaryMode::closed);
  opt.filter = LogFilter::a_parent_only;
  auto res2 = run(p, st2, 5.0, 7, opt);
  CHECK(res2.log.empty());
}

TEST_CASE("determinism: identical seeds give identical logs and snapshots") {
  auto p = derive_constants(2, 30, 0.6, 0.8, 1.0);
  CounterRng rng(11);
  auto st1 = build_initial(p, -30, 30, 0.0, rng);
  auto st2 = st1;
  RunOptions opt;
  opt.filter = LogFilter::full;
  auto r1 = run(p, st1, 1.0, 99, opt);
  auto r2 = run(p, st2, 1.0, 99, opt);
  REQUIRE(r1.log.size() == r2.log.size());
  for (size_t i = 0; i < r1.log.size(); ++i) {
    CHECK(r1.log[i].t == r2.log[i].t);
    CHECK(r1.log[i].tx == r2.log[i].tx);
    CHECK(r1.log[i].ti == r2.log[i].ti);
    CHECK(r1.log[i].px == r2.log[i].px);
    CHECK(r1.log[i].pi == r2.log[i].pi);
    CHECK(int(r1.log[i].cls) == int(r2.log[i].cls));
  }
  CHECK(st1.types == st2.types);
  // and a different seed gives a different realization
  auto st3 = st2;
  st3.time = 0.0;
  auto r3 = run(p, st3, 1.0, 100, opt);
  CHECK(r3.log.size() != r1.log.size());
}

TEST_CASE("counts cache stays coherent through a run") {
  auto p = derive_constants(2, 25, 0.4, 0.6, 1.2);
  CounterRng rng(5);
  auto st = build_initial(p, -30, 30, 0.0, rng);
  RunOptions opt;
  auto res = run(p, st, 3.0, 17, opt);
  (void)res;
  for (int32_t s = st.lo; s <= st.hi; ++s) {
    int recount = 0;
    for (int i = 0; i < p.N; ++i) recount += st.type(s, i);
    CHECK(recount == st.count(s));
  }
}

TEST_CASE("accepted-event counts match the Poisson-mean oracle") {
  // One isolated all-A deme: every P/S/Q candidate is accepted, so class
  // counts are Poisson with means given by the candidate rates.
  auto p = derive_constants(2, 50, 0.5, 0.5, 1.0);
  const double T = 2.0;
  const int runs = 200;
  // independent oracle: expected accepted counts per run
  double NN = p.N;
  double eP = NN * (NN - 1) * p.r_n * (1.0 - (p.alpha + 1.0) * p.s_n) * T;
  double eS = NN * (NN - 1) * p.r_n * p.alpha * p.s_n * T;
  double eQ = NN * (NN - 1) * (NN - 2) * p.r_n * p.s_n / NN * T;

  double cP = 0, cS = 0, cQ = 0;
  for (int r = 0; r < runs; ++r) {
    auto st = uniform_state(p, 0, 0, p.N, BoundaryMode::closed);
    RunOptions opt;
    opt.filter = LogFilter::full;
    opt.escape_guard = false;
    auto res = run(p, st, T, 1000 + uint64_t(r), opt);
    CHECK(st.count(0) == p.N);  // absorbing all-A state
    for (const auto& e : res.log.events()) {
      if (e.cls == EventClass::P) ++cP;
      if (e.cls == EventClass::S) ++cS;
      if (e.cls == EventClass::Q) ++cQ;
    }
  }
  cP /= runs;
  cS /= runs;
  cQ /= runs;
  CHECK(std::abs(cP - eP) < 4.0 * std::sqrt(eP / runs));
  CHECK(std::abs(cS - eS) < 4.0 * std::sqrt(eS / runs));
  CHECK(std::abs(cQ - eQ) < 4.0 * std::sqrt(eQ / runs));
}

TEST_CASE("event log JSONL round-trips") {
  auto p = derive_constants(2, 15, 0.5, 0.5, 1.0);
  CounterRng rng(8);
  auto st = build_initial(p, -25, 25, 0.0, rng);
  RunOptions opt;
  opt.filter = LogFilter::a_parent_only;
  auto res = run(p, st, 0.5, 3, opt);
  REQUIRE(res.log.size() > 0);

  LogMeta meta{3, p, st.lo, st.hi, "a_parent_only"};
  std::stringstream ss;
  res.log.write_jsonl(ss, meta);
  auto [log2, meta2] = EventLog::read_jsonl(ss);
  REQUIRE(log2.size() == res.log.size());
  for (size_t i = 0; i < log2.size(); ++i) {
    CHECK(log2[i].tx == res.log[i].tx);
    CHECK(log2[i].ti == res.log[i].ti);
    CHECK(log2[i].px == res.log[i].px);
    CHECK(log2[i].pi == res.log[i].pi);
    CHECK(int(log2[i].cls) == int(res.log[i].cls));
    CHECK(log2[i].t == doctest::Approx(res.log[i].t).epsilon(1e-11));
  }
  CHECK(meta2.seed == meta.seed);
  CHECK(meta2.params.N == p.N);
  CHECK(meta2.filter == "a_parent_only");
  // writing the re-read log reproduces the same bytes
  std::stringstream ss2, ss3;
  log2.write_jsonl(ss2, meta2);
  log2.write_jsonl(ss3, meta2);
  CHECK(ss2.str() == ss3.str());
}
