#ifndef MORAN_EVENT_LOG_HPP
#define MORAN_EVENT_LOG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "moran/params.hpp"

namespace moran {

/// Event classes: neutral reproduction, directional selection, selection
/// against heterozygotes, migration.
enum class EventClass : uint8_t { P = 0, S = 1, Q = 2, R = 3 };

char event_class_char(EventClass c);
EventClass event_class_from_char(char c);

/// One ACCEPTED replacement: the individual at (tx,ti) became an offspring of
/// the individual at (px,pi) at time t.  Sites are integer lattice
/// coordinates in units of 1/n (position x = site/n).  S/Q points whose type
/// condition failed are never recorded.
struct EventRecord {
  double t;
  int32_t tx, px;
  uint16_t ti, pi;
  EventClass cls;
};

struct LogMeta {
  uint64_t seed = 0;
  ModelParams params;
  int32_t win_lo = 0, win_hi = 0;  // lattice coords, inclusive
  std::string filter = "full";
};

/// Append-only, time-ordered sequence of accepted events with a per-target
/// (site,index) position index for backward scans.
class EventLog {
 public:
  void append(const EventRecord& e);

  size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const EventRecord& operator[](size_t i) const { return events_[i]; }
  const std::vector<EventRecord>& events() const { return events_; }

  /// Positions (ascending) of events whose target is the given slot.
  /// Builds the full index on first use.
  const std::vector<uint32_t>& index_for(int32_t site, uint16_t idx) const;

  /// JSON-lines: one metadata line, then one line per event with fields
  /// t (12-significant-digit decimal string), class, tx, ti, px, pi.
  void write_jsonl(std::ostream& os, const LogMeta& meta) const;
  static std::pair<EventLog, LogMeta> read_jsonl(std::istream& is);

 private:
  static uint64_t slot_key(int32_t site, uint16_t idx) {
    return (uint64_t(uint32_t(site)) << 16) | idx;
  }
  std::vector<EventRecord> events_;
  mutable std::unordered_map<uint64_t, std::vector<uint32_t>> index_;
  mutable bool index_built_ = false;
};

/// Times serialized as decimal strings with 12 significant digits.
std::string format_time(double t);

}  // namespace moran

#endif
