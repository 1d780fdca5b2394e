#include "moran/lineage_count.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moran/moran_sim.hpp"

namespace moran {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Root {
  int32_t site = 0;
  bool active = false;
  double h_local = 0.0, h_l = 0.0, h_r = 0.0;  // hidden-event channel rates
  double h = 0.0;                              // cached total
  double w = 0.0;      // remaining Exp(1) budget of the Cox clock
  double t_ref = 0.0;  // forward time the budget was last current at
  double t_fire = kNegInf;  // scheduled forward firing time
  std::vector<int> members;
};

}  // namespace

std::vector<int32_t> sample_band_count(const ModelParams& p,
                                       const CountState& state, double K0,
                                       int k, CounterRng& rng) {
  double mu = count_front_position(p, state);
  std::vector<size_t> band;
  long total = 0;
  for (size_t i = 0; i < state.a.size(); ++i) {
    double x = double(state.wlo + int32_t(i)) / p.n;
    if (std::abs(x - mu) <= K0 && state.a[i] > 0) {
      band.push_back(i);
      total += state.a[i];
    }
  }
  if (total < k) throw sim_error("sample_band_count: fewer than k type-A slots in band");
  std::vector<int32_t> taken(band.size(), 0);
  std::vector<int32_t> out;
  for (int s = 0; s < k; ++s) {
    double u = rng.next_double() * double(total);
    for (size_t b = 0; b < band.size(); ++b) {
      double avail = double(state.a[band[b]] - taken[b]);
      if (u < avail) {
        out.push_back(state.wlo + int32_t(band[b]));
        ++taken[b];
        --total;
        break;
      }
      u -= avail;
    }
  }
  return out;
}

CountTraceResult trace_count(const ModelParams& p, const CountRecord& rec,
                             const std::vector<int32_t>& start_sites,
                             double horizon, uint64_t seed,
                             const CountTraceOptions& opt) {
  const int k = int(start_sites.size());
  if (k < 1) throw domain_error("trace_count: no lineages");
  const double T = rec.final_state.time;
  const double tf_stop = T - horizon;
  if (!(horizon > 0.0) || tf_stop < rec.initial.time - 1e-12)
    throw domain_error("trace_count: horizon exceeds the recorded span");

  CountState cur = rec.final_state;
  auto at = [&](int32_t site) { return cur.at(site, p.N); };

  CounterRng rng(seed);
  std::vector<Root> roots(static_cast<size_t>(k));
  std::vector<int> parent(static_cast<size_t>(k));
  auto find = [&](int i) {
    while (parent[size_t(i)] != i) {
      parent[size_t(i)] = parent[size_t(parent[size_t(i)])];
      i = parent[size_t(i)];
    }
    return i;
  };

  // per-lineage hidden (count-invisible A-to-A) hit rates at its deme
  auto channels = [&](Root& r) {
    double a = double(at(r.site));
    r.h_local = p.r_n * (a - 1.0) * (1.0 - p.s_n + (a - 2.0) * p.s_n / p.N);
    r.h_l = p.m * p.r_n * double(at(r.site - 1));
    r.h_r = p.m * p.r_n * double(at(r.site + 1));
    r.h = r.h_local + r.h_l + r.h_r;
  };
  // consume the Exp(1) budget at the old rate up to forward time t, then
  // re-derive the channel rates and the scheduled firing time
  auto reclock = [&](Root& r, double t) {
    r.w -= r.h * (r.t_ref - t);
    r.t_ref = t;
    channels(r);
    r.t_fire = r.h > 0.0 ? t - r.w / r.h : kNegInf;
  };

  for (int i = 0; i < k; ++i) {
    parent[size_t(i)] = i;
    Root& r = roots[size_t(i)];
    r.site = start_sites[size_t(i)];
    r.active = true;
    r.members = {i};
    r.w = rng.next_exp(1.0);
    r.t_ref = T;
    channels(r);
    r.t_fire = r.h > 0.0 ? T - r.w / r.h : kNegInf;
  }
  for (int i = 0; i < k; ++i) {
    int32_t s = start_sites[size_t(i)];
    int mult = int(std::count(start_sites.begin(), start_sites.end(), s));
    if (s > cur.whi() || at(s) < mult)
      throw domain_error("trace_count: start site lacks enough type-A slots");
  }

  CountTraceResult res;
  res.tau = CoalescenceMatrix(k);
  int n_active = k;

  auto merge = [&](int loser, int winner, double t) {
    Root& L = roots[size_t(loser)];
    Root& W = roots[size_t(winner)];
    double tb = T - t;
    for (int u : L.members)
      for (int v : W.members) {
        res.tau.at(u, v) = tb;
        res.tau.at(v, u) = tb;
      }
    res.mergers.push_back(CountTraceResult::Merger{
        tb, *std::min_element(L.members.begin(), L.members.end()),
        *std::min_element(W.members.begin(), W.members.end())});
    W.members.insert(W.members.end(), L.members.begin(), L.members.end());
    parent[size_t(loser)] = winner;
    L.active = false;
    --n_active;
  };

  // a lineage arriving in deme y picks a uniform type-A parent slot there;
  // each co-located lineage is that slot with probability 1/denom
  auto coalesce_or_move = [&](int ri, int32_t y, double denom, double t) {
    double v = rng.next_double() * denom;
    for (int j = 0; j < k; ++j) {
      if (j == ri || !roots[size_t(j)].active) continue;
      if (roots[size_t(j)].site != y) continue;
      if (v < 1.0) {
        merge(ri, j, t);
        return;
      }
      v -= 1.0;
    }
    if (roots[size_t(ri)].site != y) {
      roots[size_t(ri)].site = y;
      reclock(roots[size_t(ri)], t);
    }
  };

  for (double c : opt.checkpoints)
    if (!(c >= 0.0) || c > horizon)
      throw domain_error("trace_count: checkpoint outside [0, horizon]");

  // checkpoints in decreasing forward time
  std::vector<std::pair<double, size_t>> cps;  // (forward time, output row)
  res.sites_at.assign(opt.checkpoints.size(), std::vector<int32_t>(size_t(k)));
  for (size_t c = 0; c < opt.checkpoints.size(); ++c)
    cps.push_back({T - opt.checkpoints[c], c});
  std::sort(cps.begin(), cps.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  size_t cp_idx = 0;

  size_t idx = rec.events.size();
  while (true) {
    double t_vis = idx > 0 ? rec.events[idx - 1].t : kNegInf;
    double t_hid = kNegInf;
    int hid_root = -1;
    for (int j = 0; j < k; ++j)
      if (roots[size_t(j)].active && roots[size_t(j)].t_fire > t_hid) {
        t_hid = roots[size_t(j)].t_fire;
        hid_root = j;
      }
    double t_chk = cp_idx < cps.size() ? cps[cp_idx].first : kNegInf;

    if (t_chk >= t_vis && t_chk >= t_hid && t_chk >= tf_stop && cp_idx < cps.size()) {
      auto& row = res.sites_at[cps[cp_idx].second];
      for (int i = 0; i < k; ++i) row[size_t(i)] = roots[size_t(find(i))].site;
      ++cp_idx;
      continue;
    }
    if (tf_stop >= t_vis && tf_stop >= t_hid) break;        // horizon reached
    if (n_active == 1 && cp_idx == cps.size()) break;       // nothing left to do

    if (t_hid > t_vis) {
      Root& r = roots[size_t(hid_root)];
      double t = t_hid;
      double u = rng.next_double() * r.h;
      if (u < r.h_local) {
        coalesce_or_move(hid_root, r.site, double(at(r.site)) - 1.0, t);
      } else {
        int32_t y = u < r.h_local + r.h_l ? r.site - 1 : r.site + 1;
        coalesce_or_move(hid_root, y, double(at(y)), t);
      }
      if (r.active) {  // fresh Cox budget
        r.w = rng.next_exp(1.0);
        r.t_ref = t;
        r.t_fire = r.h > 0.0 ? t - r.w / r.h : kNegInf;
      }
      continue;
    }

    const CountEvent& e = rec.events[--idx];
    if (e.delta == 0) {  // undo a window slide; no count changes
      if (cur.a.back() != 0 || cur.wlo != e.site)
        throw sim_error("trace_count: inconsistent slide event");
      cur.a.pop_back();
      cur.a.insert(cur.a.begin(), int32_t(p.N));
      --cur.wlo;
      continue;
    }
    if (e.delta > 0) {
      // the up transition created one of the a(e+) slots uniformly; decide
      // whether that slot is one of the lineages here
      double a_now = double(at(e.site));
      double v = rng.next_double() * a_now;
      int child = -1;
      for (int j = 0; j < k; ++j) {
        if (!roots[size_t(j)].active || roots[size_t(j)].site != e.site) continue;
        if (v < 1.0) {
          child = j;
          break;
        }
        v -= 1.0;
      }
      if (child >= 0) {
        int32_t y = e.site + e.parent_off;
        double denom = e.parent_off == 0 ? a_now - 1.0 : double(at(y));
        coalesce_or_move(child, y, denom, e.t);
      }
    }
    cur.a[size_t(e.site - cur.wlo)] -= e.delta;  // step to the e- counts
    for (int j = 0; j < k; ++j) {
      Root& r = roots[size_t(j)];
      if (r.active && std::abs(r.site - e.site) <= 1) reclock(r, e.t);
    }
  }
  return res;
}

}  // namespace moran
