#include "moran/event_log.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace moran {

char event_class_char(EventClass c) {
  switch (c) {
    case EventClass::P: return 'P';
    case EventClass::S: return 'S';
    case EventClass::Q: return 'Q';
    case EventClass::R: return 'R';
  }
  return '?';
}

EventClass event_class_from_char(char c) {
  switch (c) {
    case 'P': return EventClass::P;
    case 'S': return EventClass::S;
    case 'Q': return EventClass::Q;
    case 'R': return EventClass::R;
  }
  throw std::runtime_error(std::string("unknown event class '") + c + "'");
}

std::string format_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", t);
  return buf;
}

void EventLog::append(const EventRecord& e) {
  if (!events_.empty() && !(e.t > events_.back().t))
    throw std::runtime_error("EventLog::append: times must be strictly increasing");
  events_.push_back(e);
  index_built_ = false;
}

const std::vector<uint32_t>& EventLog::index_for(int32_t site, uint16_t idx) const {
  if (!index_built_) {
    index_.clear();
    for (uint32_t k = 0; k < events_.size(); ++k)
      index_[slot_key(events_[k].tx, events_[k].ti)].push_back(k);
    index_built_ = true;
  }
  static const std::vector<uint32_t> kEmpty;
  auto it = index_.find(slot_key(site, idx));
  return it == index_.end() ? kEmpty : it->second;
}

void EventLog::write_jsonl(std::ostream& os, const LogMeta& meta) const {
  nlohmann::json m = {
      {"seed", meta.seed},
      {"params",
       {{"n", meta.params.n},
        {"N", meta.params.N},
        {"alpha", meta.params.alpha},
        {"s0", meta.params.s0},
        {"m", meta.params.m}}},
      {"window", {meta.win_lo, meta.win_hi}},
      {"filter", meta.filter}};
  os << m.dump() << '\n';
  char buf[160];
  for (const auto& e : events_) {
    std::snprintf(buf, sizeof buf,
                  "{\"t\":\"%.12g\",\"class\":\"%c\",\"tx\":%d,\"ti\":%u,\"px\":%d,\"pi\":%u}\n",
                  e.t, event_class_char(e.cls), e.tx, unsigned(e.ti), e.px,
                  unsigned(e.pi));
    os << buf;
  }
}

std::pair<EventLog, LogMeta> EventLog::read_jsonl(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("EventLog::read_jsonl: missing metadata line");
  nlohmann::json m = nlohmann::json::parse(line);
  LogMeta meta;
  meta.seed = m.at("seed").get<uint64_t>();
  auto p = m.at("params");
  meta.params = derive_constants(p.at("n").get<int>(), p.at("N").get<int>(),
                                 p.at("alpha").get<double>(), p.at("s0").get<double>(),
                                 p.at("m").get<double>());
  meta.win_lo = m.at("window")[0].get<int32_t>();
  meta.win_hi = m.at("window")[1].get<int32_t>();
  meta.filter = m.at("filter").get<std::string>();

  EventLog log;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    EventRecord e;
    e.t = std::stod(j.at("t").get<std::string>());
    e.cls = event_class_from_char(j.at("class").get<std::string>().at(0));
    e.tx = j.at("tx").get<int32_t>();
    e.ti = uint16_t(j.at("ti").get<unsigned>());
    e.px = j.at("px").get<int32_t>();
    e.pi = uint16_t(j.at("pi").get<unsigned>());
    log.append(e);
  }
  return {std::move(log), std::move(meta)};
}

}  // namespace moran
