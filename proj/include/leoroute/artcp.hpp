#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "leoroute/errors.hpp"
#include "leoroute/metrics.hpp"
#include "leoroute/schedule.hpp"

namespace leoroute {

// Reno-like window dynamics for the abstract TCP model.
struct TcpParams {
  double mss_bytes = 1500.0;
  std::uint64_t initial_window = 10;
  std::uint64_t initial_ssthresh = std::numeric_limits<std::uint64_t>::max();  // unbounded
  double bottleneck_rate_bps = 1e9;
  std::uint64_t min_window = 2;

  void validate() const {
    if (!(mss_bytes > 0.0 && bottleneck_rate_bps > 0.0) || initial_window == 0 ||
        initial_ssthresh == 0 || min_window == 0) {
      throw ParameterError("TCP parameters must be positive");
    }
  }
};

// RTT series (piecewise constant from each sample to the next) and the
// instants at which packets get reordered.
struct TransportTrace {
  std::vector<std::pair<double, double>> rtt_series;  // (t, rtt) seconds
  std::vector<double> reordering_events;              // sorted
  double end_time = 0.0;
};

struct WindowSample {
  double t = 0.0;
  std::uint64_t cwnd = 0;    // congestion window state
  std::uint64_t window = 0;  // in flight: min(cwnd, BDP cap)
  double rtt = 0.0;
};

struct WindowTrace {
  std::vector<WindowSample> samples;
  double average_rate_bps = 0.0;
  double mean_window = 0.0;  // time weighted, segments
  double mean_bdp = 0.0;     // time weighted, segments
  std::uint64_t final_cwnd = 0;
};

inline std::uint64_t bdp(double rtt, const TcpParams& params) {
  if (!(rtt > 0.0)) throw ParameterError("rtt must be positive");
  return static_cast<std::uint64_t>(
      std::floor(params.bottleneck_rate_bps * rtt / (8.0 * params.mss_bytes) + 1e-9));
}

// RTT is twice the one-way delay (symmetric reverse path); every change with
// a negative delay delta is a reordering event.
inline TransportTrace derive_trace(const RouteSchedule& schedule, const ScheduleMetrics& metrics) {
  TransportTrace trace;
  trace.rtt_series.reserve(metrics.delay_series.size());
  for (const auto& [t, owd] : metrics.delay_series) trace.rtt_series.emplace_back(t, 2.0 * owd);
  for (const auto& c : metrics.changes) {
    if (c.bad) trace.reordering_events.push_back(c.t);
  }
  trace.end_time = schedule.grid.end();
  return trace;
}

// Per-RTT stepping. Each step lasts one RTT (truncated at the end of the
// trace). At the end of a full step the window grows, or, if reordering
// events fell inside the step, it is halved once per event instead.
inline WindowTrace simulate_window(const TransportTrace& trace, const TcpParams& params) {
  params.validate();
  WindowTrace out;
  if (trace.rtt_series.empty()) return out;
  constexpr double eps = 1e-9;

  const double start = trace.rtt_series.front().first;
  const double end = trace.end_time;
  std::uint64_t cwnd = params.initial_window;
  std::uint64_t ssthresh = params.initial_ssthresh;
  std::size_t rtt_idx = 0;
  std::size_t ev_idx = 0;
  double bits = 0.0;
  double window_time = 0.0;
  double bdp_time = 0.0;

  double t = start;
  while (t < end - eps) {
    while (rtt_idx + 1 < trace.rtt_series.size() && trace.rtt_series[rtt_idx + 1].first <= t + eps) {
      ++rtt_idx;
    }
    const double rtt = trace.rtt_series[rtt_idx].second;
    if (!(rtt > 0.0)) throw ParameterError("rtt must be positive");
    const std::uint64_t cap = std::max(bdp(rtt, params), params.min_window);
    const std::uint64_t window = std::min(cwnd, cap);
    const double dt = std::min(rtt, end - t);
    const double step_end = t + dt;

    out.samples.push_back({t, cwnd, window, rtt});
    bits += static_cast<double>(window) * params.mss_bytes * 8.0 / rtt * dt;
    window_time += static_cast<double>(window) * dt;
    bdp_time += static_cast<double>(cap) * dt;

    std::size_t events = 0;
    while (ev_idx < trace.reordering_events.size() && trace.reordering_events[ev_idx] < step_end - eps) {
      if (trace.reordering_events[ev_idx] >= t - eps) ++events;
      ++ev_idx;
    }
    if (events > 0) {
      std::uint64_t flight = window;
      for (std::size_t e = 0; e < events; ++e) {
        ssthresh = std::max(flight / 2, params.min_window);
        flight = ssthresh;
      }
      cwnd = ssthresh;
    } else if (dt >= rtt - eps) {
      const std::uint64_t grown = cwnd < ssthresh ? std::min(2 * cwnd, ssthresh) : cwnd + 1;
      cwnd = std::max(cwnd, std::min(grown, cap));
    }
    t = step_end;
  }

  out.final_cwnd = cwnd;
  const double span = end - start;
  if (span > 0.0) {
    out.average_rate_bps = bits / span;
    out.mean_window = window_time / span;
    out.mean_bdp = bdp_time / span;
  }
  return out;
}

}  // namespace leoroute
