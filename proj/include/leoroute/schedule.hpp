#pragma once

#include <vector>

#include "leoroute/orbital.hpp"
#include "leoroute/topology.hpp"

namespace leoroute {

// Pair of access satellites usable together over a sample interval.
struct AccessPair {
  SatelliteId src_sat;
  SatelliteId dst_sat;
  Interval samples;

  friend bool operator==(const AccessPair&, const AccessPair&) = default;
};

struct ScheduleEntry {
  Interval samples;
  Route route;
};

// Time-point to route mapping; entries are contiguous and partition
// [0, grid.count).
struct RouteSchedule {
  TimeGrid grid;
  std::vector<ScheduleEntry> entries;

  std::size_t change_count() const { return entries.empty() ? 0 : entries.size() - 1; }

  const ScheduleEntry& entry_at(std::int64_t k) const {
    auto it = std::upper_bound(entries.begin(), entries.end(), k,
                               [](std::int64_t v, const ScheduleEntry& e) { return v < e.samples.end; });
    return *it;
  }

  bool partitions_horizon() const {
    std::int64_t next = 0;
    for (const auto& e : entries) {
      if (e.samples.begin != next || e.samples.empty()) return false;
      next = e.samples.end;
    }
    return next == grid.count;
  }
};

}  // namespace leoroute
