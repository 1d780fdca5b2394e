#ifndef MORAN_ANCESTRY_HPP
#define MORAN_ANCESTRY_HPP

#include <cstdint>
#include <vector>

#include "moran/moran_sim.hpp"

namespace moran {

/// Online pedigree of the live type-A population, built while the forward
/// simulation runs.  Every accepted event with a type-A parent creates a
/// node; nodes no longer ancestral to any live A individual are reclaimed by
/// reference counting, so memory stays proportional to the surviving
/// ancestry rather than to the event count.  Walking parent pointers from a
/// sampled slot reproduces exactly the backward jump chain that a scan of
/// the full event log would produce for that sample.
class AncestryRecorder {
 public:
  static constexpr int32_t kNone = -1;

  /// Tips for every type-A slot of the initial state (birth time =
  /// state.time, no parent).
  explicit AncestryRecorder(const PopulationState& state);

  /// Called by run() for every accepted event.  parent_is_A refers to the
  /// parent's type at the event time; virtual_parent marks a pinned-boundary
  /// parent outside the window (recorded as a rootless node).
  void on_event(double t, int32_t tx, uint16_t ti, int32_t px, uint16_t pi,
                bool parent_is_A, bool virtual_parent);

  struct PathStep {
    double t_birth;  // forward time this ancestor was born (0 for roots)
    int32_t site;
    uint16_t idx;
    bool virtual_site;  // ancestor outside the window (pinned boundary)
  };

  /// Ancestor chain of the current occupant of (site,idx), most recent
  /// first.  The slot must currently hold a type-A individual.
  std::vector<PathStep> path_of(int32_t site, uint16_t idx) const;

  /// Internal node handle of a slot's current occupant, kNone if type a.
  int32_t node_of(int32_t site, uint16_t idx) const;

  /// Forward coalescence time of two sampled slots: the largest forward time
  /// at which their ancestor chains first share an individual, or -inf if
  /// they never do within the recorded pedigree.  (Backward time is
  /// T - value.)
  double pair_coalescence_forward_time(int32_t s1, uint16_t i1, int32_t s2,
                                       uint16_t i2) const;

  size_t live_nodes() const { return live_; }

 private:
  struct Node {
    double t;
    int32_t site;
    int32_t parent;  // kNone for roots
    uint32_t refcount;
    uint16_t idx;
    uint8_t virt;
  };

  int32_t new_node(double t, int32_t site, uint16_t idx, int32_t parent, bool virt);
  void release(int32_t id);
  size_t slot(int32_t site, uint16_t idx) const {
    return size_t(site - lo_) * N_ + idx;
  }

  std::vector<Node> nodes_;
  std::vector<int32_t> free_;
  std::vector<int32_t> cur_;  // node per window slot, kNone if type a
  int32_t lo_;
  int N_;
  size_t live_ = 0;
};

}  // namespace moran

#endif
