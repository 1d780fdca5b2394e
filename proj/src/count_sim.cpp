#include "moran/count_sim.hpp"

#include <algorithm>
#include <cmath>

#include "moran/analytic.hpp"
#include "moran/moran_sim.hpp"

namespace moran {

namespace {

/// Fenwick tree over per-site rates: O(log W) point update and
/// proportional sampling.
class RateTree {
 public:
  explicit RateTree(size_t w) : tree_(w + 1, 0.0), leaf_(w, 0.0) {}

  void set(size_t i, double v) {
    double d = v - leaf_[i];
    leaf_[i] = v;
    for (size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += d;
  }
  double get(size_t i) const { return leaf_[i]; }

  double total() const {
    double s = 0.0;
    for (size_t j = tree_.size() - 1; j > 0; j &= j - 1) s += tree_[j];
    return s;
  }

  /// Smallest i with prefix-sum over leaves [0..i] exceeding u.
  size_t sample(double u) const {
    size_t pos = 0, mask = 1;
    while (2 * mask < tree_.size()) mask *= 2;
    for (; mask > 0; mask /= 2) {
      size_t next = pos + mask;
      if (next < tree_.size() && tree_[next] <= u) {
        u -= tree_[next];
        pos = next;
      }
    }
    return std::min(pos, leaf_.size() - 1);  // pos == count of leaves before
  }

  /// Recompute the internal sums from the leaves (clears rounding drift).
  void rebuild() {
    std::fill(tree_.begin(), tree_.end(), 0.0);
    for (size_t i = 0; i < leaf_.size(); ++i) {
      double v = leaf_[i];
      leaf_[i] = 0.0;
      set(i, v);
    }
  }

 private:
  std::vector<double> tree_;  // tree_[j] covers leaves [j - lowbit(j), j)
  std::vector<double> leaf_;
};

struct SiteRates {
  double up_local, up_l, up_r, down_local, down_l, down_r;
  double total() const {
    return up_local + up_l + up_r + down_local + down_l + down_r;
  }
};

SiteRates site_rates(const ModelParams& p, int32_t a, int32_t al, int32_t ar) {
  const double N = p.N;
  const double vac = double(p.N - a);
  SiteRates r;
  r.up_local = p.r_n * vac * a * (1.0 - p.s_n + (a - 1) * p.s_n / N);
  r.up_l = p.m * p.r_n * vac * al;
  r.up_r = p.m * p.r_n * vac * ar;
  r.down_local =
      p.r_n * a * vac * (1.0 - (p.alpha + 1.0) * p.s_n + (p.N - a - 1) * p.s_n / N);
  r.down_l = p.m * p.r_n * a * (N - al);
  r.down_r = p.m * p.r_n * a * (N - ar);
  return r;
}

}  // namespace

double count_site_rate(const ModelParams& p, int32_t a, int32_t al, int32_t ar) {
  return site_rates(p, a, al, ar).total();
}

CountState count_initial(const ModelParams& p, int32_t win_lo, int32_t win_hi,
                         double center) {
  if (win_hi <= win_lo) throw domain_error("count_initial: empty window");
  double g_lo = wave_profile(double(win_lo) / p.n - center, p.kappa);
  double g_hi = wave_profile(double(win_hi) / p.n - center, p.kappa);
  if (g_lo <= 1.0 - 0.5 / p.N || g_hi >= 0.5 / p.N)
    throw domain_error(
        "count_initial: window too narrow for saturated far fields");
  CountState st;
  st.wlo = win_lo;
  st.a.resize(size_t(win_hi - win_lo + 1));
  for (size_t i = 0; i < st.a.size(); ++i) {
    double x = double(win_lo + int32_t(i)) / p.n;
    st.a[i] = int32_t(std::lround(p.N * wave_profile(x - center, p.kappa)));
  }
  return st;
}

double count_front_position(const ModelParams& p, const CountState& state) {
  for (size_t i = state.a.size(); i > 0; --i)
    if (2 * state.a[i - 1] >= p.N)
      return double(state.wlo + int32_t(i - 1)) / p.n;
  throw sim_error("count_front_position: no site with a >= N/2");
}

CountRecord count_run(const ModelParams& p, CountState state, double T,
                      uint64_t seed, const CountRunOptions& opt) {
  CountRecord rec;
  rec.initial = state;
  const size_t W = state.a.size();
  if (W < 3) throw domain_error("count_run: window narrower than 3 sites");

  auto at = [&](int32_t i) {  // window-index access with pinned extension
    if (i < 0) return int32_t(p.N);
    if (i >= int32_t(W)) return int32_t(0);
    return state.a[size_t(i)];
  };

  RateTree rates(W);
  auto refresh = [&](int32_t i) {
    if (i < 0 || i >= int32_t(W)) return;
    rates.set(size_t(i), count_site_rate(p, at(i), at(i - 1), at(i + 1)));
  };
  for (int32_t i = 0; i < int32_t(W); ++i) refresh(i);

  int32_t top = int32_t(W) - 1;  // rightmost occupied window index
  while (top > 0 && state.a[size_t(top)] == 0) --top;

  CounterRng rng(seed);
  const double t_end = state.time + T;
  uint64_t since_rebuild = 0;

  while (true) {
    double total = rates.total();
    state.time += rng.next_exp(total);
    if (state.time >= t_end) {
      state.time = t_end;
      break;
    }
    if (++since_rebuild == (1u << 22)) {
      rates.rebuild();
      since_rebuild = 0;
    }

    int32_t i = int32_t(rates.sample(rng.next_double() * total));
    SiteRates r = site_rates(p, at(i), at(i - 1), at(i + 1));
    if (!(r.total() > 0.0)) continue;  // rounding fringe of the tree search
    double u = rng.next_double() * r.total();
    int8_t delta, off;
    if ((u -= r.up_local) < 0.0) delta = 1, off = 0;
    else if ((u -= r.up_l) < 0.0) delta = 1, off = -1;
    else if ((u -= r.up_r) < 0.0) delta = 1, off = 1;
    else if ((u -= r.down_local) < 0.0) delta = -1, off = 0;
    else if ((u -= r.down_l) < 0.0) delta = -1, off = -1;
    else delta = -1, off = 1;

    state.a[size_t(i)] += delta;
    rec.events.push_back(CountEvent{state.time, state.wlo + i, delta, off});
    refresh(i - 1);
    refresh(i);
    refresh(i + 1);
    if (delta > 0 && i > top) top = i;
    while (top > 0 && state.a[size_t(top)] == 0) --top;

    if (opt.allow_slide && top >= int32_t(W) - opt.slide_margin) {
      if (state.a[0] != int32_t(p.N))
        throw sim_error(
            "count_run: window slide needed but left edge not saturated; "
            "widen the window");
      state.a.erase(state.a.begin());
      state.a.push_back(0);
      ++state.wlo;
      --top;
      rec.events.push_back(CountEvent{state.time, state.wlo, 0, 0});
      for (int32_t j = 0; j < int32_t(W); ++j) refresh(j);
      rates.rebuild();
      since_rebuild = 0;
    }
  }
  rec.final_state = state;
  return rec;
}

CountState count_rewind(const ModelParams& p, const CountRecord& rec) {
  CountState st = rec.final_state;
  for (size_t k = rec.events.size(); k > 0; --k) {
    const CountEvent& e = rec.events[k - 1];
    if (e.delta == 0) {
      if (st.a.back() != 0 || st.wlo != e.site)
        throw sim_error("count_rewind: inconsistent slide event");
      st.a.pop_back();
      st.a.insert(st.a.begin(), int32_t(p.N));
      --st.wlo;
    } else {
      st.a[size_t(e.site - st.wlo)] -= e.delta;
    }
  }
  st.time = rec.initial.time;
  return st;
}

}  // namespace moran
