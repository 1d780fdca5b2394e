#include "moran/ancestry.hpp"

#include <unordered_map>

namespace moran {

AncestryRecorder::AncestryRecorder(const PopulationState& state)
    : lo_(state.lo), N_(state.N) {
  cur_.assign(size_t(state.nsites()) * N_, kNone);
  for (int32_t s = state.lo; s <= state.hi; ++s)
    for (int i = 0; i < N_; ++i)
      if (state.type(s, i))
        cur_[slot(s, uint16_t(i))] = new_node(state.time, s, uint16_t(i), kNone, false);
}

int32_t AncestryRecorder::new_node(double t, int32_t site, uint16_t idx,
                                   int32_t parent, bool virt) {
  int32_t id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = int32_t(nodes_.size());
    nodes_.emplace_back();
  }
  nodes_[id] = Node{t, site, parent, 1, idx, uint8_t(virt)};
  ++live_;
  return id;
}

void AncestryRecorder::release(int32_t id) {
  while (id != kNone && --nodes_[id].refcount == 0) {
    int32_t parent = nodes_[id].parent;
    free_.push_back(id);
    --live_;
    id = parent;
  }
}

void AncestryRecorder::on_event(double t, int32_t tx, uint16_t ti, int32_t px,
                                uint16_t pi, bool parent_is_A, bool virtual_parent) {
  int32_t& target = cur_[slot(tx, ti)];
  if (parent_is_A) {
    int32_t parent_node;
    if (virtual_parent) {
      // ancestor beyond the pinned all-A edge: rootless marker node
      parent_node = new_node(t, px, pi, kNone, true);
    } else {
      parent_node = cur_[slot(px, pi)];
      ++nodes_[parent_node].refcount;
    }
    int32_t child = new_node(t, tx, ti, parent_node, false);
    int32_t old = target;
    target = child;
    release(old);
  } else if (target != kNone) {
    // a type-a offspring displaced a type-A individual
    int32_t old = target;
    target = kNone;
    release(old);
  }
}

int32_t AncestryRecorder::node_of(int32_t site, uint16_t idx) const {
  return cur_[slot(site, idx)];
}

std::vector<AncestryRecorder::PathStep> AncestryRecorder::path_of(
    int32_t site, uint16_t idx) const {
  std::vector<PathStep> out;
  for (int32_t id = cur_[slot(site, idx)]; id != kNone; id = nodes_[id].parent) {
    const Node& v = nodes_[id];
    out.push_back(PathStep{v.t, v.site, v.idx, v.virt != 0});
  }
  return out;
}

double AncestryRecorder::pair_coalescence_forward_time(int32_t s1, uint16_t i1,
                                                       int32_t s2,
                                                       uint16_t i2) const {
  // entry[v] = forward time lineage 1's ancestry entered individual v,
  // i.e. the birth time of v's child on the chain (+inf at the tip).
  std::unordered_map<int32_t, double> entry;
  double child_birth = std::numeric_limits<double>::infinity();
  for (int32_t id = cur_[slot(s1, i1)]; id != kNone; id = nodes_[id].parent) {
    entry[id] = child_birth;
    child_birth = nodes_[id].t;
  }
  child_birth = std::numeric_limits<double>::infinity();
  for (int32_t id = cur_[slot(s2, i2)]; id != kNone; id = nodes_[id].parent) {
    auto it = entry.find(id);
    if (it != entry.end()) {
      // deepest common node: both occupy it up to the earlier exit
      return std::min(it->second, child_birth);
    }
    child_birth = nodes_[id].t;
  }
  return -std::numeric_limits<double>::infinity();
}

}  // namespace moran
