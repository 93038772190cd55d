#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "leoroute/artcp.hpp"
#include "leoroute/errors.hpp"
#include "leoroute/metrics.hpp"
#include "leoroute/selection.hpp"

namespace leoroute {

// Everything one algorithm produced for one ground-station pair.
struct AlgorithmRun {
  Algorithm algorithm = Algorithm::dijkstra;
  RouteSchedule schedule;
  ScheduleMetrics metrics;
  TransportTrace trace;
  WindowTrace window;
  double wall_time_s = 0.0;  // route selection only
};

struct AlgorithmSummary {
  double mean_owd = 0.0;
  double median_owd = 0.0;
  double mean_validity = 0.0;
  std::size_t change_count = 0;
  std::size_t bad_change_count = 0;
  double avg_rate_bps = 0.0;
  double mean_window = 0.0;
  double mean_bdp = 0.0;
  double wall_time_s = 0.0;
};

struct PairResult {
  GroundStation src;
  GroundStation dst;
  bool ok = true;
  std::string error;
  std::array<AlgorithmSummary, 4> per_algorithm{};

  const AlgorithmSummary& operator[](Algorithm a) const {
    return per_algorithm[static_cast<std::size_t>(a)];
  }
};

inline AlgorithmRun run_algorithm(Algorithm algorithm, const IslGraph& graph, const GroundStation& src,
                                  const GroundStation& dst, const DelayModel& model,
                                  const TcpParams& tcp, const TimeGrid& grid) {
  AlgorithmRun run;
  run.algorithm = algorithm;
  try {
    const auto t_start = std::chrono::steady_clock::now();
    run.schedule = select_route_schedule(algorithm, graph, src, dst, model, grid);
    run.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  } catch (const NoRouteError& e) {
    throw NoRouteError(fmt::format("{}: {}", algorithm_name(algorithm), e.what()));
  }
  run.metrics = evaluate(graph, run.schedule, src, dst, model);
  run.trace = derive_trace(run.schedule, run.metrics);
  run.window = simulate_window(run.trace, tcp);
  return run;
}

inline AlgorithmSummary summarize(const AlgorithmRun& run) {
  AlgorithmSummary s;
  s.mean_owd = run.metrics.mean_owd;
  s.median_owd = run.metrics.median_owd;
  s.mean_validity = mean(run.metrics.validity_durations);
  s.change_count = run.metrics.change_count;
  s.bad_change_count = run.metrics.bad_change_count;
  s.avg_rate_bps = run.window.average_rate_bps;
  s.mean_window = run.window.mean_window;
  s.mean_bdp = run.window.mean_bdp;
  s.wall_time_s = run.wall_time_s;
  return s;
}

// All four algorithms, their metrics and the TCP model on one pair.
inline PairResult run_pair(const IslGraph& graph, const GroundStation& src, const GroundStation& dst,
                           const DelayModel& model, const TcpParams& tcp, const TimeGrid& grid) {
  PairResult result{src, dst, true, {}, {}};
  for (Algorithm a : kAllAlgorithms) {
    result.per_algorithm[static_cast<std::size_t>(a)] =
        summarize(run_algorithm(a, graph, src, dst, model, tcp, grid));
  }
  return result;
}

struct GridSpec {
  double lat_step = 10.0;
  double lon_step = 10.0;
  double lat_bound = 0.0;

  void validate(double inclination_deg) const {
    if (!(lat_step > 0.0 && lon_step > 0.0)) throw ParameterError("grid steps must be positive");
    if (!(lat_bound >= 0.0 && lat_bound <= inclination_deg + 1e-9)) {
      throw ParameterError(fmt::format("latitude bound {} exceeds inclination {}", lat_bound, inclination_deg));
    }
  }
};

// Latitudes 0, step, 2 step, ... up to the bound. Walker symmetry makes
// negative latitudes and other longitudes redundant for the first station.
inline std::vector<double> first_station_latitudes(const GridSpec& spec) {
  std::vector<double> lats;
  const auto n = static_cast<int>(std::floor(spec.lat_bound / spec.lat_step + 1e-9));
  for (int i = 0; i <= n; ++i) lats.push_back(spec.lat_step * i);
  return lats;
}

// Full grid for the second station: latitudes within +-bound, longitudes
// over the whole circle in (-180, 180].
inline std::vector<GroundStation> second_station_grid(const GridSpec& spec) {
  std::vector<GroundStation> out;
  const auto n_lat = static_cast<int>(std::floor(spec.lat_bound / spec.lat_step + 1e-9));
  const auto n_lon = static_cast<int>(std::floor(360.0 / spec.lon_step + 1e-9));
  for (int j = -n_lat; j <= n_lat; ++j) {
    for (int i = 0; i < n_lon; ++i) {
      double lon = spec.lon_step * i;
      if (lon > 180.0 + 1e-9) lon -= 360.0;
      const double lat = spec.lat_step * j;
      out.push_back({fmt::format("grid({:g},{:g})", lat, lon), lat, lon});
    }
  }
  return out;
}

inline std::vector<std::pair<GroundStation, GroundStation>> grid_pairs(
    const std::vector<double>& first_station_lats, const GridSpec& spec) {
  std::vector<std::pair<GroundStation, GroundStation>> pairs;
  const auto second = second_station_grid(spec);
  for (double lat : first_station_lats) {
    const GroundStation first{fmt::format("grid({:g},0)", lat), lat, 0.0};
    for (const auto& other : second) {
      if (std::abs(other.latitude_deg - lat) < 1e-9 && std::abs(other.longitude_deg) < 1e-9) continue;
      pairs.emplace_back(first, other);
    }
  }
  return pairs;
}

// Evaluate pairs on a worker pool; results keep the input order.
inline std::vector<PairResult> run_pairs(const IslGraph& graph,
                                         const std::vector<std::pair<GroundStation, GroundStation>>& pairs,
                                         const DelayModel& model, const TcpParams& tcp,
                                         const TimeGrid& grid, unsigned threads = 0) {
  std::vector<PairResult> results(pairs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(pairs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      const auto& [a, b] = pairs[i];
      try {
        results[i] = run_pair(graph, a, b, model, tcp, grid);
      } catch (const NoRouteError& e) {
        results[i] = PairResult{a, b, false, e.what(), {}};
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return results;
}

inline std::vector<PairResult> run_grid(const IslGraph& graph, const std::vector<double>& first_station_lats,
                                        const GridSpec& spec, const DelayModel& model,
                                        const TcpParams& tcp, const TimeGrid& grid,
                                        unsigned threads = 0) {
  spec.validate(graph.params().inclination_deg);
  return run_pairs(graph, grid_pairs(first_station_lats, spec), model, tcp, grid, threads);
}

struct CdfTables {
  std::vector<std::pair<double, double>> delay;     // mean OWD, seconds
  std::vector<std::pair<double, double>> validity;  // mean validity, seconds
  std::vector<std::pair<double, double>> rate;      // average rate, bit/s
};

// Per-algorithm CDFs over the successful pairs.
inline std::map<Algorithm, CdfTables> aggregate_cdf(const std::vector<PairResult>& results) {
  std::map<Algorithm, CdfTables> out;
  for (Algorithm a : kAllAlgorithms) {
    std::vector<double> d, v, r;
    for (const auto& res : results) {
      if (!res.ok) continue;
      d.push_back(res[a].mean_owd);
      v.push_back(res[a].mean_validity);
      r.push_back(res[a].avg_rate_bps);
    }
    if (d.empty()) throw ParameterError("no successful results to aggregate");
    out[a] = {cdf_points(d), cdf_points(v), cdf_points(r)};
  }
  return out;
}

struct OrderStatistics {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  double iqr() const { return q3 - q1; }
};

// Quantiles by linear interpolation between closest ranks.
inline double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) throw ParameterError("quantile of an empty sequence");
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline OrderStatistics order_statistics(const std::vector<double>& xs) {
  return {quantile(xs, 0.0), quantile(xs, 0.25), quantile(xs, 0.5), quantile(xs, 0.75), quantile(xs, 1.0)};
}

struct BenchmarkTable {
  std::array<std::vector<double>, 4> raw;  // wall times per algorithm, pair order
  std::array<OrderStatistics, 4> stats{};

  const OrderStatistics& operator[](Algorithm a) const { return stats[static_cast<std::size_t>(a)]; }
};

// Route-selection wall times per algorithm; runs pairs sequentially so the
// timings do not compete for cores. Pairs without a route are dropped for
// every algorithm so the samples stay paired.
inline BenchmarkTable benchmark(const IslGraph& graph,
                                const std::vector<std::pair<GroundStation, GroundStation>>& pairs,
                                const DelayModel& model, const TimeGrid& grid) {
  BenchmarkTable table;
  for (const auto& [src, dst] : pairs) {
    std::array<double, 4> times{};
    try {
      for (Algorithm a : kAllAlgorithms) {
        const auto t_start = std::chrono::steady_clock::now();
        const auto schedule = select_route_schedule(a, graph, src, dst, model, grid);
        times[static_cast<std::size_t>(a)] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        (void)schedule;
      }
    } catch (const NoRouteError&) {
      continue;
    }
    for (std::size_t i = 0; i < 4; ++i) table.raw[i].push_back(times[i]);
  }
  if (table.raw[0].size() < 5) {
    throw ParameterError(fmt::format("benchmark needs at least 5 routable pairs, got {}", table.raw[0].size()));
  }
  for (std::size_t i = 0; i < 4; ++i) table.stats[i] = order_statistics(table.raw[i]);
  return table;
}

}  // namespace leoroute
