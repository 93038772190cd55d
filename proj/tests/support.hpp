#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "leoroute/orbital.hpp"
#include "leoroute/setcover.hpp"
#include "leoroute/topology.hpp"

namespace support {

using namespace leoroute;

inline WalkerParameters starlink() { return {53.0, 1584, 72, 39, 550.0, 40.0}; }

// 60:12/3/1; 1500 km and a 10 degree mask keep most random stations covered.
inline WalkerParameters tiny() { return {60.0, 12, 3, 1, 1500.0, 10.0}; }

// 60:40/5/1 desk-scale shell.
inline WalkerParameters desk() { return {60.0, 40, 5, 1, 2000.0, 10.0}; }

inline GroundStation bariloche() { return {"Bariloche", -41.133, -71.310}; }
inline GroundStation beijing() { return {"Beijing", 39.904, 116.407}; }

inline GroundStation random_station(std::mt19937_64& rng, double lat_bound, const char* name) {
  std::uniform_real_distribution<double> lat(-lat_bound, lat_bound);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  return {name, lat(rng), lon(rng)};
}

// Minimum one-way delay over every simple satellite path between a visible
// source access and a visible destination access, by depth-first search.
// Delays are accumulated link by link in path order.
inline double brute_force_delay(const IslGraph& graph, const GroundStation& src, const GroundStation& dst,
                                const DelayModel& model, double t) {
  const auto& c = graph.constellation();
  const double mask = c.params().min_elevation_deg;
  const Vec3 gs = ground_position(src, t);
  const Vec3 gd = ground_position(dst, t);
  std::vector<Vec3> pos;
  c.positions(t, pos);
  std::vector<char> on_path(pos.size(), 0);
  double best = std::numeric_limits<double>::infinity();

  std::function<void(int, double)> dfs = [&](int v, double acc) {
    if (is_visible(gd, pos[v], mask)) {
      best = std::min(best, acc + model.link_delay(distance(pos[v], gd)));
    }
    for (int w : graph.neighbours(v)) {
      if (on_path[w]) continue;
      on_path[w] = 1;
      dfs(w, acc + model.link_delay(distance(pos[v], pos[w])));
      on_path[w] = 0;
    }
  };
  for (int s = 0; s < c.size(); ++s) {
    if (!is_visible(gs, pos[s], mask)) continue;
    on_path[s] = 1;
    dfs(s, 0.0 + model.link_delay(distance(gs, pos[s])));
    on_path[s] = 0;
  }
  return best;
}

// Exhaustive minimum-weight cover; infinity if none exists.
inline double brute_force_cover(const CoverInstance& instance) {
  const std::size_t m = instance.elements.size();
  const auto n = instance.grid.count;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1U) w += instance.elements[i].weight;
    }
    if (w >= best) continue;
    bool covered = true;
    for (std::int64_t k = 0; k < n && covered; ++k) {
      bool hit = false;
      for (std::size_t i = 0; i < m && !hit; ++i) {
        hit = (mask >> i & 1U) && instance.elements[i].pair.samples.contains(k);
      }
      covered = hit;
    }
    if (covered) best = w;
  }
  return best;
}

// Random instance over `count` samples; when `feasible`, a chain of
// overlapping intervals guarantees coverage.
inline CoverInstance random_instance(std::mt19937_64& rng, std::size_t elements, std::int64_t count,
                                     bool feasible, bool unit_weights = true) {
  CoverInstance inst{{0.0, 1.0, count}, {}};
  std::uniform_int_distribution<std::int64_t> start(0, count - 1);
  std::uniform_int_distribution<std::int64_t> len(1, std::max<std::int64_t>(count / 3, 1));
  std::uniform_int_distribution<int> weight(1, 4);
  auto add = [&](std::int64_t b, std::int64_t e) {
    const int sat = static_cast<int>(inst.elements.size());
    inst.elements.push_back({{{0, sat}, {0, sat}, {b, std::min(e, count)}},
                             unit_weights ? 1.0 : static_cast<double>(weight(rng))});
  };
  if (feasible) {
    std::int64_t b = 0;
    while (b < count && inst.elements.size() + 1 < elements) {
      const std::int64_t e = std::min(count, b + len(rng) + 1);
      add(b, e);
      b = std::max<std::int64_t>(b + 1, e - len(rng) / 2);
      if (e == count) break;
    }
    if (inst.elements.empty() || inst.elements.back().pair.samples.end < count) add(b, count);
  }
  while (inst.elements.size() < elements) {
    const auto b = start(rng);
    add(b, b + len(rng));
  }
  std::shuffle(inst.elements.begin(), inst.elements.end(), rng);
  return inst;
}

}  // namespace support
