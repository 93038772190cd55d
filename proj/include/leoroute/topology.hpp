#pragma once

#include <array>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "leoroute/errors.hpp"
#include "leoroute/orbital.hpp"

namespace leoroute {

using NodeId = std::variant<SatelliteId, GroundStation>;

// How inter-plane links close the ring between plane P-1 and plane 0.
enum class SeamLinking {
  // (P-1, q) links to (0, (q + F) mod Q): the satellite that continues the
  // phase progression, i.e. the geometric neighbour across the seam.
  phase_aligned,
  // (P-1, q) links to (0, q) regardless of phasing.
  same_slot,
};

// +Grid inter-satellite topology: every satellite keeps permanent links to
// its two in-plane neighbours (slot +-1) and to its left and right
// neighbours on the adjacent planes (same slot, except across the seam).
class IslGraph {
 public:
  explicit IslGraph(const WalkerParameters& params, SeamLinking seam = SeamLinking::phase_aligned)
      : constellation_(params), seam_(seam) {
    const int P = constellation_.planes();
    const int Q = constellation_.slots();
    const int shift = seam == SeamLinking::phase_aligned ? constellation_.params().phasing % Q : 0;
    if (P < 3 || Q < 3) {
      throw ParameterError(
          fmt::format("+Grid needs at least 3 planes and 3 slots per plane, got {}x{}", P, Q));
    }
    adjacency_.resize(static_cast<std::size_t>(constellation_.size()));
    for (int p = 0; p < P; ++p) {
      for (int q = 0; q < Q; ++q) {
        std::array<int, 4> nb = {
            p * Q + (q + 1) % Q,
            p * Q + (q + Q - 1) % Q,
            p + 1 < P ? (p + 1) * Q + q : (q + shift) % Q,
            p > 0 ? (p - 1) * Q + q : (P - 1) * Q + (q + Q - shift) % Q,
        };
        std::sort(nb.begin(), nb.end());
        adjacency_[static_cast<std::size_t>(p * Q + q)] = nb;
      }
    }
  }

  const Constellation& constellation() const { return constellation_; }
  const WalkerParameters& params() const { return constellation_.params(); }
  int size() const { return constellation_.size(); }
  SeamLinking seam() const { return seam_; }

  // Neighbour flat indices in ascending order.
  const std::array<int, 4>& neighbours(int index) const {
    return adjacency_[static_cast<std::size_t>(index)];
  }
  std::array<SatelliteId, 4> neighbours(SatelliteId id) const {
    const auto& nb = neighbours(constellation_.index(id));
    return {constellation_.id(nb[0]), constellation_.id(nb[1]), constellation_.id(nb[2]),
            constellation_.id(nb[3])};
  }

  bool adjacent(int a, int b) const {
    const auto& nb = neighbours(a);
    return std::find(nb.begin(), nb.end(), b) != nb.end();
  }

  std::size_t edge_count() const { return adjacency_.size() * 4 / 2; }

 private:
  Constellation constellation_;
  SeamLinking seam_;
  std::vector<std::array<int, 4>> adjacency_;
};

inline IslGraph build_isl_graph(const WalkerParameters& params,
                                SeamLinking seam = SeamLinking::phase_aligned) {
  return IslGraph(params, seam);
}

struct DelayModel {
  double data_rate_bps = 1e9;
  double packet_size_bytes = 1500.0;
  double queueing_s = 1e-3;

  double transmission_delay() const { return packet_size_bytes * 8.0 / data_rate_bps; }

  // Store-and-forward: every link costs propagation, one serialization and
  // one queueing/processing interval.
  double link_delay(double length_km) const {
    return length_km / constants::light_speed_km_s + transmission_delay() + queueing_s;
  }

  void validate() const {
    if (!(data_rate_bps > 0.0 && packet_size_bytes > 0.0 && queueing_s > 0.0)) {
      throw ParameterError("delay model parameters must be strictly positive");
    }
  }
};

// End-to-end route between a source and a destination ground station. Only
// the satellite hops are stored; the stations are implied by the caller.
struct Route {
  std::vector<SatelliteId> satellites;
  double computed_at = 0.0;

  SatelliteId src_access() const { return satellites.front(); }
  SatelliteId dst_access() const { return satellites.back(); }
  int isl_hops() const { return static_cast<int>(satellites.size()) - 1; }
  int link_count() const { return static_cast<int>(satellites.size()) + 1; }

  std::vector<NodeId> nodes(const GroundStation& src, const GroundStation& dst) const {
    std::vector<NodeId> out;
    out.reserve(satellites.size() + 2);
    out.emplace_back(src);
    for (const auto& s : satellites) out.emplace_back(s);
    out.emplace_back(dst);
    return out;
  }

  // Route identity is node-sequence identity.
  bool same_path(const Route& other) const { return satellites == other.satellites; }
};

inline double one_way_delay(std::span<const double> link_lengths_km, const DelayModel& model) {
  double total = 0.0;
  for (double l : link_lengths_km) total += model.link_delay(l);
  return total;
}

inline double link_length(const IslGraph& graph, const NodeId& a, const NodeId& b, double t) {
  const auto* sa = std::get_if<SatelliteId>(&a);
  const auto* sb = std::get_if<SatelliteId>(&b);
  if (sa && sb) {
    const auto& c = graph.constellation();
    if (!graph.adjacent(c.index(*sa), c.index(*sb))) {
      throw TopologyError(fmt::format("({}, {}) and ({}, {}) are not ISL neighbours", sa->plane,
                                      sa->slot, sb->plane, sb->slot));
    }
    return distance(c.position(c.index(*sa), t), c.position(c.index(*sb), t));
  }
  if (!sa && !sb) throw TopologyError("ground stations cannot link directly");
  const auto& sat = sa ? *sa : *sb;
  const auto& gs = sa ? std::get<GroundStation>(b) : std::get<GroundStation>(a);
  const Vec3 g = ground_position(gs, t);
  const Vec3 p = graph.constellation().position(graph.constellation().index(sat), t);
  if (!is_visible(g, p, graph.params().min_elevation_deg)) {
    throw VisibilityError(fmt::format("satellite ({}, {}) not visible from {} at t={}", sat.plane,
                                      sat.slot, gs.name, t));
  }
  return distance(g, p);
}

// Link lengths of the route at time t, uplink first, downlink last.
inline std::vector<double> route_link_lengths(const IslGraph& graph, const Route& route,
                                              const GroundStation& src, const GroundStation& dst,
                                              double t) {
  if (route.satellites.empty()) throw TopologyError("route without satellites");
  const auto nodes = route.nodes(src, dst);
  std::vector<double> lengths;
  lengths.reserve(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    lengths.push_back(link_length(graph, nodes[i], nodes[i + 1], t));
  }
  return lengths;
}

inline double one_way_delay(const IslGraph& graph, const Route& route, const GroundStation& src,
                            const GroundStation& dst, const DelayModel& model, double t) {
  return one_way_delay(route_link_lengths(graph, route, src, dst, t), model);
}

inline std::vector<int> visible_satellites(const IslGraph& graph, const GroundStation& gs, double t) {
  const auto& c = graph.constellation();
  const Vec3 g = ground_position(gs, t);
  const double min_el = c.params().min_elevation_deg;
  std::vector<int> out;
  for (int i = 0; i < c.size(); ++i) {
    if (is_visible(g, c.position(i, t), min_el)) out.push_back(i);
  }
  return out;
}

namespace detail {

// Dijkstra over the ISL graph extended by a source ground node (linked to
// `src_access`) and a destination ground node (linked from `dst_access`).
// Returns the satellite path, or an empty vector when unreachable. Ties are
// settled by smallest flat index, which is smallest (plane, slot).
inline std::vector<int> dijkstra(const IslGraph& graph, std::span<const int> src_access,
                                 std::span<const int> dst_access, const GroundStation& src,
                                 const GroundStation& dst, const DelayModel& model, double t,
                                 double* delay_out = nullptr) {
  const auto& c = graph.constellation();
  const int n = c.size();
  const int src_node = n;
  const int dst_node = n + 1;
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<Vec3> pos;
  c.positions(t, pos);
  const Vec3 src_pos = ground_position(src, t);
  const Vec3 dst_pos = ground_position(dst, t);

  std::vector<double> dist(static_cast<std::size_t>(n + 2), inf);
  std::vector<int> prev(static_cast<std::size_t>(n + 2), -1);
  std::vector<char> done(static_cast<std::size_t>(n + 2), 0);
  std::vector<double> exit_delay(static_cast<std::size_t>(n), inf);
  for (int s : dst_access) {
    exit_delay[static_cast<std::size_t>(s)] = model.link_delay(distance(pos[static_cast<std::size_t>(s)], dst_pos));
  }

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[static_cast<std::size_t>(src_node)] = 0.0;
  open.emplace(0.0, src_node);

  auto relax = [&](int from, int to, double w) {
    const double nd = dist[static_cast<std::size_t>(from)] + w;
    if (nd < dist[static_cast<std::size_t>(to)]) {
      dist[static_cast<std::size_t>(to)] = nd;
      prev[static_cast<std::size_t>(to)] = from;
      open.emplace(nd, to);
    }
  };

  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (done[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = 1;
    if (u == dst_node) break;
    if (u == src_node) {
      for (int s : src_access) {
        relax(u, s, model.link_delay(distance(src_pos, pos[static_cast<std::size_t>(s)])));
      }
      continue;
    }
    const Vec3& pu = pos[static_cast<std::size_t>(u)];
    for (int v : graph.neighbours(u)) {
      if (done[static_cast<std::size_t>(v)]) continue;
      relax(u, v, model.link_delay(distance(pu, pos[static_cast<std::size_t>(v)])));
    }
    if (exit_delay[static_cast<std::size_t>(u)] < inf) relax(u, dst_node, exit_delay[static_cast<std::size_t>(u)]);
  }

  if (!done[static_cast<std::size_t>(dst_node)]) return {};
  if (delay_out) *delay_out = dist[static_cast<std::size_t>(dst_node)];
  std::vector<int> path;
  for (int v = prev[static_cast<std::size_t>(dst_node)]; v != src_node; v = prev[static_cast<std::size_t>(v)]) {
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

inline Route to_route(const IslGraph& graph, const std::vector<int>& path, double t) {
  Route r;
  r.computed_at = t;
  r.satellites.reserve(path.size());
  for (int v : path) r.satellites.push_back(graph.constellation().id(v));
  return r;
}

}  // namespace detail

// Minimum one-way-delay route at time t over the ISLs plus every ground
// link that is above the elevation mask at t.
inline Route shortest_route(const IslGraph& graph, const GroundStation& src,
                            const GroundStation& dst, const DelayModel& model, double t) {
  const auto src_vis = visible_satellites(graph, src, t);
  const auto dst_vis = visible_satellites(graph, dst, t);
  if (src_vis.empty() || dst_vis.empty()) {
    throw NoRouteError(fmt::format("no access satellite for {} at t={}",
                                   src_vis.empty() ? src.name : dst.name, t));
  }
  const auto path = detail::dijkstra(graph, src_vis, dst_vis, src, dst, model, t);
  if (path.empty()) throw NoRouteError(fmt::format("{} and {} disconnected at t={}", src.name, dst.name, t));
  return detail::to_route(graph, path, t);
}

// Shortest route at time t forced through the given access satellites.
// Visibility of the access satellites is the caller's responsibility.
inline Route shortest_route_via(const IslGraph& graph, SatelliteId src_sat, SatelliteId dst_sat,
                                const GroundStation& src, const GroundStation& dst,
                                const DelayModel& model, double t, double* delay_out = nullptr) {
  const auto& c = graph.constellation();
  const int a = c.index(src_sat);
  const int b = c.index(dst_sat);
  const auto path = detail::dijkstra(graph, std::span<const int>(&a, 1), std::span<const int>(&b, 1),
                                     src, dst, model, t, delay_out);
  return detail::to_route(graph, path, t);
}

}  // namespace leoroute
