#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "leoroute/errors.hpp"
#include "leoroute/schedule.hpp"
#include "leoroute/topology.hpp"

namespace leoroute {

struct RouteChangeEvent {
  double t = 0.0;
  double owd_old = 0.0;
  double owd_new = 0.0;
  double delta = 0.0;  // owd_new - owd_old
  bool bad = false;    // delta < 0: later packets overtake earlier ones
};

struct ScheduleMetrics {
  std::vector<std::pair<double, double>> delay_series;  // (t, owd) in seconds
  std::vector<double> validity_durations;               // seconds, one per entry
  std::vector<RouteChangeEvent> changes;
  double median_owd = 0.0;
  double mean_owd = 0.0;
  std::size_t change_count = 0;
  std::size_t bad_change_count = 0;
};

// Lower median.
inline double median(std::vector<double> values) {
  if (values.empty()) throw ParameterError("median of an empty sequence");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

inline double mean(const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("mean of an empty sequence");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

// Delay of each entry's fixed route at every sample of its interval. At a
// boundary k the old delay is the previous route at sample k-1 and the new
// delay is the next route at sample k.
inline ScheduleMetrics evaluate(const IslGraph& graph, const RouteSchedule& schedule,
                                const GroundStation& src, const GroundStation& dst,
                                const DelayModel& model) {
  ScheduleMetrics m;
  const auto& grid = schedule.grid;
  m.delay_series.reserve(static_cast<std::size_t>(grid.count));
  std::vector<double> owds;
  owds.reserve(static_cast<std::size_t>(grid.count));
  for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
    const auto& entry = schedule.entries[i];
    for (std::int64_t k = entry.samples.begin; k < entry.samples.end; ++k) {
      const double t = grid.at(k);
      const double owd = one_way_delay(graph, entry.route, src, dst, model, t);
      if (k == entry.samples.begin && i > 0) {
        const double old = owds.back();
        m.changes.push_back({t, old, owd, owd - old, owd - old < 0.0});
      }
      m.delay_series.emplace_back(t, owd);
      owds.push_back(owd);
    }
    m.validity_durations.push_back(static_cast<double>(entry.samples.length()) * grid.step);
  }
  if (!owds.empty()) {
    m.median_owd = median(owds);
    m.mean_owd = mean(owds);
  }
  m.change_count = m.changes.size();
  m.bad_change_count = static_cast<std::size_t>(
      std::count_if(m.changes.begin(), m.changes.end(), [](const auto& c) { return c.bad; }));
  return m;
}

// Empirical CDF: sorted values paired with i/n, i = 1..n.
inline std::vector<std::pair<double, double>> cdf_points(std::vector<double> values) {
  if (values.empty()) throw ParameterError("CDF of an empty sequence");
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(values.size());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.emplace_back(values[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

// First value whose cumulative fraction reaches q.
inline double cdf_quantile(const std::vector<std::pair<double, double>>& cdf, double q) {
  for (const auto& [v, f] : cdf) {
    if (f >= q - 1e-12) return v;
  }
  return cdf.back().first;
}

}  // namespace leoroute
