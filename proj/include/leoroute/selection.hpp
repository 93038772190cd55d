#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "leoroute/errors.hpp"
#include "leoroute/orbital.hpp"
#include "leoroute/schedule.hpp"
#include "leoroute/setcover.hpp"
#include "leoroute/topology.hpp"

namespace leoroute {

enum class Algorithm { dijkstra, stubborn, tenacious, setcover };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms = {
    Algorithm::dijkstra, Algorithm::stubborn, Algorithm::tenacious, Algorithm::setcover};

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::dijkstra: return "dijkstra";
    case Algorithm::stubborn: return "stubborn";
    case Algorithm::tenacious: return "tenacious";
    case Algorithm::setcover: return "setcover";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

namespace detail {

inline void append_entry(RouteSchedule& schedule, std::int64_t k, Route route) {
  if (!schedule.entries.empty() && schedule.entries.back().route.same_path(route) &&
      schedule.entries.back().samples.end == k) {
    schedule.entries.back().samples.end = k + 1;
    return;
  }
  schedule.entries.push_back({{k, k + 1}, std::move(route)});
}

inline bool access_visible(const IslGraph& graph, SatelliteId sat, const GroundStation& gs, double t) {
  const auto& c = graph.constellation();
  return is_visible(ground_position(gs, t), c.position(c.index(sat), t), c.params().min_elevation_deg);
}

}  // namespace detail

// Instantaneous shortest route at every sample point; equal consecutive
// routes share one entry.
inline RouteSchedule select_dijkstra(const IslGraph& graph, const GroundStation& src,
                                     const GroundStation& dst, const DelayModel& model,
                                     const TimeGrid& grid) {
  RouteSchedule schedule{grid, {}};
  for (std::int64_t k = 0; k < grid.count; ++k) {
    detail::append_entry(schedule, k, shortest_route(graph, src, dst, model, grid.at(k)));
  }
  return schedule;
}

// Keep the current shortest route until one of its access satellites drops
// below the elevation mask, then recompute.
inline RouteSchedule select_stubborn(const IslGraph& graph, const GroundStation& src,
                                     const GroundStation& dst, const DelayModel& model,
                                     const TimeGrid& grid) {
  RouteSchedule schedule{grid, {}};
  std::int64_t k = 0;
  while (k < grid.count) {
    Route route = shortest_route(graph, src, dst, model, grid.at(k));
    std::int64_t end = k + 1;
    while (end < grid.count && detail::access_visible(graph, route.src_access(), src, grid.at(end)) &&
           detail::access_visible(graph, route.dst_access(), dst, grid.at(end))) {
      ++end;
    }
    schedule.entries.push_back({{k, end}, std::move(route)});
    k = end;
  }
  return schedule;
}

// Sample index at which a fixed route is computed for an interval: the grid
// point nearest to ts + 3/4 (te - ts), kept inside the interval.
inline std::int64_t three_quarter_sample(const Interval& iv) {
  const double target = static_cast<double>(iv.begin) + 0.75 * static_cast<double>(iv.length());
  const auto k = static_cast<std::int64_t>(std::floor(target + 0.5));
  return std::clamp(k, iv.begin, iv.end - 1);
}

// Route used for a whole access-pair interval: shortest path between the two
// access satellites at the three-quarter point.
inline Route route_for_pair(const IslGraph& graph, const AccessPair& pair, const GroundStation& src,
                            const GroundStation& dst, const DelayModel& model, const TimeGrid& grid) {
  const double t = grid.at(three_quarter_sample(pair.samples));
  Route route = shortest_route_via(graph, pair.src_sat, pair.dst_sat, src, dst, model, t);
  if (route.satellites.empty()) {
    throw NoRouteError(fmt::format("no ISL path between ({}, {}) and ({}, {}) at t={}", pair.src_sat.plane,
                                   pair.src_sat.slot, pair.dst_sat.plane, pair.dst_sat.slot, t));
  }
  return route;
}

enum class TenaciousVariant {
  direction_aware,  // best ascending and best descending candidate per station
  longest_only,     // single longest-remaining-visibility candidate per station
};

struct TenaciousChoice {
  AccessPair pair;
  double delay_at_selection = 0.0;
};

namespace detail {

struct Candidate {
  int sat = -1;
  std::int64_t end = -1;
};

// Visible satellites at sample k with the longest remaining visibility;
// ties go to the smallest (plane, slot).
inline std::vector<Candidate> access_candidates(const std::vector<VisibilityWindow>& windows,
                                                const Constellation& c, std::int64_t k, double t,
                                                TenaciousVariant variant) {
  Candidate asc, desc, any;
  auto better = [](const Candidate& cand, const Candidate& cur) {
    return cur.sat < 0 || cand.end > cur.end || (cand.end == cur.end && cand.sat < cur.sat);
  };
  for (const auto& w : windows) {
    if (!w.samples.contains(k)) continue;
    const Candidate cand{c.index(w.satellite), w.samples.end};
    if (better(cand, any)) any = cand;
    auto& slot = c.is_ascending(cand.sat, t) ? asc : desc;
    if (better(cand, slot)) slot = cand;
  }
  std::vector<Candidate> out;
  if (variant == TenaciousVariant::longest_only) {
    if (any.sat >= 0) out.push_back(any);
    return out;
  }
  if (asc.sat >= 0) out.push_back(asc);
  if (desc.sat >= 0) out.push_back(desc);
  return out;
}

}  // namespace detail

// Access pair chosen at sample k, scored by the delay of the constrained
// shortest route at that same instant.
inline TenaciousChoice tenacious_choice(const IslGraph& graph, const GroundStation& src,
                                        const GroundStation& dst, const DelayModel& model,
                                        const TimeGrid& grid,
                                        const std::vector<VisibilityWindow>& src_windows,
                                        const std::vector<VisibilityWindow>& dst_windows,
                                        std::int64_t k, TenaciousVariant variant) {
  const auto& c = graph.constellation();
  const double t = grid.at(k);
  const auto src_cands = detail::access_candidates(src_windows, c, k, t, variant);
  const auto dst_cands = detail::access_candidates(dst_windows, c, k, t, variant);
  if (src_cands.empty() || dst_cands.empty()) {
    throw NoRouteError(fmt::format("no access satellite for {} at t={}",
                                   src_cands.empty() ? src.name : dst.name, t));
  }
  std::optional<TenaciousChoice> best;
  for (const auto& a : src_cands) {
    for (const auto& b : dst_cands) {
      double delay = 0.0;
      const Route r = shortest_route_via(graph, c.id(a.sat), c.id(b.sat), src, dst, model, t, &delay);
      if (r.satellites.empty()) continue;
      if (!best || delay < best->delay_at_selection) {
        best = TenaciousChoice{{c.id(a.sat), c.id(b.sat), {k, std::min(a.end, b.end)}}, delay};
      }
    }
  }
  if (!best) throw NoRouteError(fmt::format("no ISL path between access candidates at t={}", t));
  return *best;
}

inline RouteSchedule select_tenacious(const IslGraph& graph, const GroundStation& src,
                                      const GroundStation& dst, const DelayModel& model,
                                      const TimeGrid& grid,
                                      TenaciousVariant variant = TenaciousVariant::direction_aware) {
  const auto src_windows = visibility_windows(src, graph.constellation(), grid);
  const auto dst_windows = visibility_windows(dst, graph.constellation(), grid);
  RouteSchedule schedule{grid, {}};
  std::int64_t k = 0;
  while (k < grid.count) {
    const auto choice =
        tenacious_choice(graph, src, dst, model, grid, src_windows, dst_windows, k, variant);
    schedule.entries.push_back(
        {choice.pair.samples, route_for_pair(graph, choice.pair, src, dst, model, grid)});
    k = choice.pair.samples.end;
  }
  return schedule;
}

// Make consecutive intervals of a minimal cover disjoint by cutting each
// overlap at its midpoint m = (te + ts') / 2, floored to the sample grid.
inline std::vector<AccessPair> cut_overlaps(std::vector<AccessPair> selected) {
  for (std::size_t i = 0; i + 1 < selected.size(); ++i) {
    auto& cur = selected[i];
    auto& next = selected[i + 1];
    if (next.samples.begin > cur.samples.end) {
      throw CoverError(fmt::format("gap between samples {} and {} in selected cover", cur.samples.end,
                                   next.samples.begin));
    }
    if (next.samples.begin <= cur.samples.begin || next.samples.end <= cur.samples.end) {
      throw CoverError("selected cover intervals are not a strictly increasing chain");
    }
    const std::int64_t m = (cur.samples.end + next.samples.begin) / 2;
    if (m <= cur.samples.begin) {
      throw CoverError(fmt::format("cutting at sample {} empties an interval", m));
    }
    cur.samples.end = m;
    next.samples.begin = m;
  }
  return selected;
}

inline RouteSchedule select_setcover(const IslGraph& graph, const GroundStation& src,
                                     const GroundStation& dst, const DelayModel& model,
                                     const TimeGrid& grid) {
  const CoverInstance instance = build_instance(src, dst, graph.constellation(), grid);
  CoverSolution solution;
  try {
    solution = solve_exact(instance);
  } catch (const CoverError& e) {
    throw NoRouteError(e.what());
  }
  std::vector<AccessPair> pairs;
  pairs.reserve(solution.selected.size());
  for (std::size_t i : solution.selected) pairs.push_back(instance.elements[i].pair);
  pairs = cut_overlaps(std::move(pairs));

  RouteSchedule schedule{grid, {}};
  for (const auto& p : pairs) {
    schedule.entries.push_back({p.samples, route_for_pair(graph, p, src, dst, model, grid)});
  }
  return schedule;
}

inline RouteSchedule select_route_schedule(Algorithm algorithm, const IslGraph& graph,
                                           const GroundStation& src, const GroundStation& dst,
                                           const DelayModel& model, const TimeGrid& grid) {
  switch (algorithm) {
    case Algorithm::dijkstra: return select_dijkstra(graph, src, dst, model, grid);
    case Algorithm::stubborn: return select_stubborn(graph, src, dst, model, grid);
    case Algorithm::tenacious: return select_tenacious(graph, src, dst, model, grid);
    case Algorithm::setcover: return select_setcover(graph, src, dst, model, grid);
  }
  throw ParameterError("unknown algorithm");
}

}  // namespace leoroute
