#include "moran/moran_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "moran/analytic.hpp"
#include "moran/ancestry.hpp"

namespace moran {

namespace {

struct ClassRates {
  double wP, wS, wQ, wR, total;
};

ClassRates class_rates(const ModelParams& p) {
  double N = p.N;
  ClassRates c;
  c.wP = N * (N - 1) * p.r_n * (1.0 - (p.alpha + 1.0) * p.s_n);
  c.wS = N * (N - 1) * p.r_n * p.alpha * p.s_n;
  c.wQ = N * (N - 1) * (N - 2) * p.r_n * p.s_n / N;
  c.wR = 2.0 * p.m * p.r_n * N * N;
  c.total = c.wP + c.wS + c.wQ + c.wR;
  return c;
}

}  // namespace

double site_event_rate(const ModelParams& p) { return class_rates(p).total; }

PopulationState build_initial(const ModelParams& p, int32_t win_lo, int32_t win_hi,
                              double center, CounterRng& rng, BoundaryMode boundary) {
  double g_lo = wave_profile(double(win_lo) / p.n - center, p.kappa);
  double g_hi = wave_profile(double(win_hi) / p.n - center, p.kappa);
  if (!(g_lo > 1.0 - 0.5 / p.N) || !(g_hi < 0.5 / p.N))
    throw domain_error("window too narrow: need g(x_lo-center) > 1-1/(2N) and "
                       "g(x_hi-center) < 1/(2N)");

  PopulationState st;
  st.n = p.n;
  st.N = p.N;
  st.lo = win_lo;
  st.hi = win_hi;
  st.boundary = boundary;
  st.types.assign(size_t(st.nsites()) * p.N, 0);
  st.counts.assign(size_t(st.nsites()), 0);

  std::vector<int> labels(p.N);
  for (int32_t s = win_lo; s <= win_hi; ++s) {
    double g = wave_profile(double(s) / p.n - center, p.kappa);
    int a = int(std::lround(g * p.N));
    a = std::clamp(a, 0, p.N);
    st.counts[size_t(s - win_lo)] = a;
    if (a == 0) continue;
    // uniformly random a-subset of [N] via partial Fisher-Yates
    std::iota(labels.begin(), labels.end(), 0);
    for (int i = 0; i < a; ++i)
      std::swap(labels[i], labels[i + rng.next_below(uint32_t(p.N - i))]);
    for (int i = 0; i < a; ++i) st.type(s, labels[i]) = 1;
  }
  return st;
}

double front_position(const PopulationState& state) {
  for (int32_t s = state.hi; s >= state.lo; --s)
    if (2 * state.count(s) >= state.N) return state.x_of(s);
  throw sim_error("no front: every site has p < 1/2");
}

RunResult run(const ModelParams& p, PopulationState& st, double T, uint64_t seed,
              const RunOptions& opt) {
  const ClassRates cr = class_rates(p);
  const int32_t ns = st.nsites();
  const int N = p.N;
  const double total = cr.total * ns;
  const double t_end = st.time + T;
  const bool pinned = st.boundary == BoundaryMode::pinned;
  const bool need_A = opt.filter == LogFilter::a_parent_only || opt.recorder != nullptr;
  const bool full_log = opt.filter == LogFilter::full;

  RunResult res;
  // One stream drives the (time, site) skeleton; each candidate event gets
  // its own counter-derived substream for class/participant draws.  This
  // keeps the realization identical across log filters and recorder modes:
  // skipping a provably irrelevant site never shifts the draw sequence.
  CounterRng rng(seed);
  uint64_t ev_ctr = 0;

  auto take_snapshot = [&](double t) {
    Snapshot snap;
    snap.time = t;
    snap.lo = st.lo;
    snap.p.resize(size_t(ns));
    for (int32_t s = 0; s < ns; ++s) snap.p[size_t(s)] = double(st.counts[size_t(s)]) / N;
    res.snapshots.push_back(std::move(snap));
    if (opt.escape_guard && pinned && ns > 12) {
      if (st.count(st.hi - 5) > 0 || st.count(st.lo + 5) < N)
        throw sim_error("front escaped window guard band at t=" + format_time(t));
    }
  };

  take_snapshot(st.time);
  double next_snap = opt.snapshot_cadence > 0
                         ? st.time + opt.snapshot_cadence
                         : std::numeric_limits<double>::infinity();

  double t = st.time;
  while (true) {
    t += rng.next_exp(total);
    while (next_snap <= t_end && next_snap <= t) {
      take_snapshot(next_snap);
      next_snap += opt.snapshot_cadence;
    }
    if (t > t_end) break;

    const int32_t s = st.lo + int32_t(rng.next_below(uint32_t(ns)));
    ++ev_ctr;
    const int a = st.count(s);

    // Monomorphic fast path: skip sites whose candidate events can neither
    // change state nor produce a loggable/recordable type-A parent.
    if (!full_log && (a == 0 || a == N)) {
      const uint8_t c = a == N;
      auto injects_other = [&](int32_t nb, uint8_t virt_type) {
        if (nb < st.lo || nb > st.hi)
          return st.boundary == BoundaryMode::pinned && virt_type != c;
        int an = st.count(nb);
        return c ? an < N : an > 0;
      };
      bool can_change = injects_other(s - 1, 1) || injects_other(s + 1, 0);
      if (!can_change) {
        bool a_parent_possible = false;
        if (need_A && c == 0) {
          auto injects_A = [&](int32_t nb, uint8_t virt_type) {
            if (nb < st.lo || nb > st.hi)
              return st.boundary == BoundaryMode::pinned && virt_type == 1;
            return st.count(nb) > 0;
          };
          a_parent_possible = injects_A(s - 1, 1) || injects_A(s + 1, 0);
        } else if (need_A) {
          a_parent_possible = true;  // all-A deme: within-site A parents
        }
        if (!(need_A && a_parent_possible)) continue;
      }
    }

    // class, participants, acceptance
    CounterRng ev(seed, ev_ctr);
    double u = ev.next_double() * cr.total;
    EventClass cls;
    int32_t px = s;
    uint16_t ti, pi_;
    uint8_t parent_type;
    bool virt = false;

    if (u < cr.wP + cr.wS + cr.wQ) {
      uint32_t i = ev.next_below(uint32_t(N));
      uint32_t j = ev.next_below(uint32_t(N - 1));
      if (j >= i) ++j;
      ti = uint16_t(i);
      pi_ = uint16_t(j);
      parent_type = st.type(s, int(j));
      if (u < cr.wP) {
        cls = EventClass::P;
      } else if (u < cr.wP + cr.wS) {
        cls = EventClass::S;
        if (parent_type != 1) continue;  // rejected
      } else {
        cls = EventClass::Q;
        uint32_t k = ev.next_below(uint32_t(N - 2));
        uint32_t lo2 = std::min(i, j), hi2 = std::max(i, j);
        if (k >= lo2) ++k;
        if (k >= hi2) ++k;
        if (st.type(s, int(k)) != parent_type) continue;  // referees disagree
      }
    } else {
      cls = EventClass::R;
      int32_t y = s + (ev.next_below(2) ? 1 : -1);
      if (y < st.lo || y > st.hi) {
        if (st.boundary == BoundaryMode::closed) continue;  // no such clock
        virt = true;
        parent_type = y < st.lo ? 1 : 0;
      } else {
        parent_type = 0;  // set below
      }
      px = y;
      pi_ = uint16_t(ev.next_below(uint32_t(N)));
      ti = uint16_t(ev.next_below(uint32_t(N)));
      if (!virt) parent_type = st.type(y, int(pi_));
    }

    // accepted replacement
    uint8_t& slot = st.type(s, int(ti));
    if (slot != parent_type) {
      st.counts[size_t(s - st.lo)] += parent_type ? 1 : -1;
      slot = parent_type;
    }
    if (opt.recorder)
      opt.recorder->on_event(t, s, ti, px, pi_, parent_type == 1, virt);
    if ((full_log || (opt.filter == LogFilter::a_parent_only && parent_type == 1)) &&
        t >= opt.log_t_min && t <= opt.log_t_max)
      res.log.append(EventRecord{t, s, px, ti, pi_, cls});
  }

  st.time = t_end;
  return res;
}

}  // namespace moran
