#include "moran/lineage.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <unordered_map>

namespace moran {

namespace {

uint64_t slot_key(Slot s) { return (uint64_t(uint32_t(s.first)) << 16) | s.second; }

struct Segment {
  std::vector<LineagePath::Jump> jumps;
  int next = -1;
};

struct Root {
  Slot slot;
  uint32_t bound;  // exclusive upper event-index bound for the next jump
  int seg;
  int64_t pending = -1;  // candidate event index in the heap, -1 if none
  std::vector<int> members;
};

struct TraceCore {
  std::vector<LineagePath> paths;
  CoalescenceMatrix tau;
  std::vector<int> root_of;     // final union-find root per sample
  std::vector<Slot> final_slot; // ancestor slot at the horizon
};

TraceCore trace_core(const EventLog& log, double T, const std::vector<Slot>& samples,
                     double horizon, int32_t win_lo, int32_t win_hi,
                     double log_t_min, bool record_tau) {
  const int k = int(samples.size());
  if (horizon < 0 || horizon > T - log_t_min + 1e-12)
    throw domain_error("trace horizon exceeds the logged range");
  for (const auto& s : samples)
    if (s.first < win_lo || s.first > win_hi)
      throw domain_error("sample site outside the traced window");

  const auto& ev = log.events();
  auto t_less = [](const EventRecord& e, double t) { return e.t < t; };
  // events with t in (T - horizon, T]
  uint32_t start = uint32_t(std::lower_bound(ev.begin(), ev.end(),
                                             std::nextafter(T - horizon, T), t_less) -
                            ev.begin());
  uint32_t end = uint32_t(std::upper_bound(ev.begin(), ev.end(), T,
                                           [](double t, const EventRecord& e) {
                                             return t < e.t;
                                           }) -
                          ev.begin());

  std::vector<Segment> segs(static_cast<size_t>(k));
  std::vector<Root> roots(static_cast<size_t>(k));
  std::vector<int> parent(static_cast<size_t>(k));
  std::unordered_map<uint64_t, int> occupant;

  std::function<int(int)> find = [&](int i) {
    while (parent[size_t(i)] != i) {
      parent[size_t(i)] = parent[size_t(parent[size_t(i)])];
      i = parent[size_t(i)];
    }
    return i;
  };

  // max-heap of (event index, root)
  std::priority_queue<std::pair<uint32_t, int>> heap;

  auto candidate = [&](Slot s, uint32_t bound) -> int64_t {
    const auto& idx = log.index_for(s.first, s.second);
    auto it = std::lower_bound(idx.begin(), idx.end(), bound);
    if (it == idx.begin()) return -1;
    uint32_t pos = *(it - 1);
    return pos >= start ? int64_t(pos) : -1;
  };

  auto push_candidate = [&](int r) {
    int64_t c = candidate(roots[size_t(r)].slot, roots[size_t(r)].bound);
    roots[size_t(r)].pending = c;
    if (c >= 0) heap.push({uint32_t(c), r});
  };

  CoalescenceMatrix tau(record_tau ? k : 0);
  for (int i = 0; i < k; ++i) {
    parent[size_t(i)] = i;
    roots[size_t(i)] = Root{samples[size_t(i)], end, i, -1, {i}};
    auto [it, fresh] = occupant.try_emplace(slot_key(samples[size_t(i)]), i);
    if (!fresh) throw domain_error("duplicate sample slot");
    push_candidate(i);
  }

  while (!heap.empty()) {
    auto [pos, r0] = heap.top();
    heap.pop();
    int r = find(r0);
    if (r != r0 || roots[size_t(r)].pending != int64_t(pos)) continue;  // stale
    roots[size_t(r)].pending = -1;

    const EventRecord& e = ev[pos];
    Slot from = roots[size_t(r)].slot;
    Slot to{e.px, e.pi};
    bool virt = e.px < win_lo || e.px > win_hi;

    occupant.erase(slot_key(from));
    segs[size_t(roots[size_t(r)].seg)].jumps.push_back(
        LineagePath::Jump{e.t, e.px, e.pi, virt});

    auto occ = virt ? occupant.end() : occupant.find(slot_key(to));
    if (occ != occupant.end()) {
      int o = occ->second;
      double tb = T - e.t;
      auto& rm = roots[size_t(r)].members;
      auto& om = roots[size_t(o)].members;
      if (record_tau)
        for (int i : rm)
          for (int j : om) {
            tau.at(i, j) = tb;
            tau.at(j, i) = tb;
          }
      // merge r into the occupant o; both continue on a shared segment
      int shared = int(segs.size());
      segs.emplace_back();
      segs[size_t(roots[size_t(r)].seg)].next = shared;
      segs[size_t(roots[size_t(o)].seg)].next = shared;
      roots[size_t(o)].seg = shared;
      roots[size_t(o)].bound = pos;
      om.insert(om.end(), rm.begin(), rm.end());
      parent[size_t(r)] = o;
      // o's pending candidate (if any) has index < pos and stays valid
    } else {
      roots[size_t(r)].slot = to;
      roots[size_t(r)].bound = pos;
      if (!virt) {
        occupant[slot_key(to)] = r;
        push_candidate(r);
      }
      // a virtual ancestor is frozen: no events ever target it
    }
  }

  TraceCore out;
  out.tau = std::move(tau);
  out.root_of.resize(size_t(k));
  out.final_slot.resize(size_t(k));
  out.paths.resize(size_t(k));
  for (int i = 0; i < k; ++i) {
    out.root_of[size_t(i)] = find(i);
    out.final_slot[size_t(i)] = roots[size_t(out.root_of[size_t(i)])].slot;
    LineagePath& path = out.paths[size_t(i)];
    path.sample = i;
    path.T = T;
    path.anchor = samples[size_t(i)];
    for (int sg = i; sg != -1; sg = segs[size_t(sg)].next)
      path.jumps.insert(path.jumps.end(), segs[size_t(sg)].jumps.begin(),
                        segs[size_t(sg)].jumps.end());
  }
  return out;
}

}  // namespace

double DiagnosticsConfig::default_delta(const ModelParams& p) {
  return 1.0 / std::floor(std::sqrt(double(p.N)) * p.n * p.n);
}

Slot LineagePath::at_backward(double tb) const {
  // last jump with forward time >= T - tb; jumps are in decreasing t order
  double cut = T - tb;
  auto it = std::partition_point(jumps.begin(), jumps.end(),
                                 [cut](const Jump& j) { return j.t >= cut; });
  if (it == jumps.begin()) return anchor;
  const Jump& j = *(it - 1);
  return {j.site, j.idx};
}

void LineagePath::write_csv(std::ostream& os) const {
  os << sample << ",0," << anchor.first << ',' << anchor.second << '\n';
  for (const auto& j : jumps)
    os << sample << ',' << format_time(T - j.t) << ',' << j.site << ',' << j.idx
       << '\n';
}

void CoalescenceMatrix::write_csv(std::ostream& os) const {
  os << "i,j,tau\n";
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      os << i << ',' << j << ',';
      if (at(i, j))
        os << format_time(*at(i, j));
      else
        os << "inf";
      os << '\n';
    }
}

TraceResult trace(const EventLog& log, double T, const std::vector<Slot>& samples,
                  double horizon, int32_t win_lo, int32_t win_hi, double log_t_min) {
  auto core = trace_core(log, T, samples, horizon, win_lo, win_hi, log_t_min, true);
  return TraceResult{std::move(core.paths), std::move(core.tau)};
}

namespace {

std::vector<Slot> a_slots_at(const PopulationState& st, int32_t x) {
  std::vector<Slot> out;
  for (int i = 0; i < st.N; ++i)
    if (st.type(x, i)) out.push_back({x, uint16_t(i)});
  return out;
}

}  // namespace

double tracer_q(const EventLog& log, const PopulationState& state_t2, double t1,
                double t2, int32_t x1, int32_t x2, double log_t_min) {
  if (t1 > t2) throw domain_error("tracer_q: need t1 <= t2");
  auto samples = a_slots_at(state_t2, x2);
  if (samples.empty()) return 0.0;
  auto core = trace_core(log, t2, samples, t2 - t1, state_t2.lo, state_t2.hi,
                         log_t_min, false);
  int hits = 0;
  for (const auto& s : core.final_slot) hits += (s.first == x1);
  return double(hits) / state_t2.N;
}

double tracer_q_sided(const EventLog& log, const PopulationState& state_t2,
                      double t1, double t2, int32_t x1, int32_t x2, int dir,
                      double log_t_min) {
  if (t1 > t2) throw domain_error("tracer_q_sided: need t1 <= t2");
  if (dir != 1 && dir != -1) throw domain_error("tracer_q_sided: dir must be +-1");
  auto samples = a_slots_at(state_t2, x2);
  if (samples.empty()) return 0.0;
  auto core = trace_core(log, t2, samples, t2 - t1, state_t2.lo, state_t2.hi,
                         log_t_min, false);
  int hits = 0;
  for (const auto& s : core.final_slot)
    hits += dir > 0 ? (s.first >= x1) : (s.first <= x1);
  return double(hits) / state_t2.N;
}

long pair_ancestor_counts(const EventLog& log, const PopulationState& state_after,
                          double t, double delta,
                          const std::vector<int32_t>& x_list, double log_t_min) {
  const size_t ell = x_list.size();
  if (ell != 2 && ell != 3)
    throw domain_error("pair_ancestor_counts supports tuple sizes 2 and 3 only");

  std::vector<int32_t> sites = x_list;
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());

  std::vector<Slot> samples;
  for (int32_t x : sites) {
    auto s = a_slots_at(state_after, x);
    samples.insert(samples.end(), s.begin(), s.end());
  }
  if (samples.empty()) return 0;

  auto core = trace_core(log, t + delta, samples, delta, state_after.lo,
                         state_after.hi, log_t_min, false);

  // per ancestor group, count members anchored at each queried site
  std::unordered_map<int, std::unordered_map<int32_t, long>> group_counts;
  for (size_t i = 0; i < samples.size(); ++i)
    ++group_counts[core.root_of[i]][samples[i].first];

  // multiplicity of each distinct site in the tuple
  std::unordered_map<int32_t, int> mult;
  for (int32_t x : x_list) ++mult[x];

  long total = 0;
  for (auto& [root, counts] : group_counts) {
    long prod = 1;
    for (auto& [x, r] : mult) {
      long c = counts.count(x) ? counts[x] : 0;
      for (int j = 0; j < r; ++j) prod *= std::max(c - j, 0L);
    }
    total += prod;
  }
  return total;
}

double stayed_ahead_fraction(const EventLog& log, const PopulationState& state_t,
                             const std::function<double(double)>& mu_of_t,
                             double y, double ell, double s, double t, int32_t x,
                             double log_t_min) {
  if (ell <= 0) throw domain_error("stayed_ahead_fraction: need ell > 0");
  auto samples = a_slots_at(state_t, x);
  if (samples.empty()) return 0.0;
  auto core = trace_core(log, t, samples, s, state_t.lo, state_t.hi, log_t_min,
                         false);
  int pass = 0;
  for (const auto& path : core.paths) {
    bool ok = true;
    for (double tb = 0.0; tb <= s + 1e-12 && ok; tb += ell) {
      Slot z = path.at_backward(std::min(tb, s));
      double zeta = double(z.first) / state_t.n;
      ok = zeta >= mu_of_t(t - std::min(tb, s)) + y;
    }
    pass += ok;
  }
  return double(pass) / state_t.N;
}

void replay(PopulationState& state, const EventLog& log, double t1) {
  const auto& ev = log.events();
  auto it = std::upper_bound(ev.begin(), ev.end(), state.time,
                             [](double t, const EventRecord& e) { return t < e.t; });
  for (; it != ev.end() && it->t <= t1; ++it) {
    uint8_t parent_type;
    if (it->px < state.lo)
      parent_type = 1;
    else if (it->px > state.hi)
      parent_type = 0;
    else
      parent_type = state.type(it->px, it->pi);
    uint8_t& slot = state.type(it->tx, it->ti);
    if (slot != parent_type) {
      state.counts[size_t(it->tx - state.lo)] += parent_type ? 1 : -1;
      slot = parent_type;
    }
  }
  state.time = t1;
}

std::vector<Slot> sample_near_front(const PopulationState& state, double K0, int k,
                                    CounterRng& rng) {
  double mu = front_position(state);
  std::vector<Slot> band;
  for (int32_t s = state.lo; s <= state.hi; ++s) {
    if (std::abs(state.x_of(s) - mu) > K0 + 1e-12) continue;
    for (int i = 0; i < state.N; ++i)
      if (state.type(s, i)) band.push_back({s, uint16_t(i)});
  }
  if (int(band.size()) < k)
    throw sim_error("fewer than k type-A individuals within K0 of the front");
  for (int i = 0; i < k; ++i)
    std::swap(band[size_t(i)],
              band[size_t(i) + rng.next_below(uint32_t(band.size() - i))]);
  band.resize(size_t(k));
  return band;
}

}  // namespace moran
