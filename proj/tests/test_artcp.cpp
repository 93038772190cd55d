#include <gtest/gtest.h>

#include <random>

#include "leoroute/artcp.hpp"

using namespace leoroute;

namespace {

TransportTrace constant(double rtt, double horizon, std::vector<double> events = {}) {
  return {{{0.0, rtt}}, std::move(events), horizon};
}

// Random piecewise-constant RTTs on a 1 s grid with sorted random events.
TransportTrace random_trace(std::mt19937_64& rng, int seconds, int events) {
  std::uniform_real_distribution<double> rtt(0.03, 0.3);
  std::uniform_real_distribution<double> when(0.0, seconds);
  TransportTrace trace;
  for (int s = 0; s < seconds; ++s) trace.rtt_series.emplace_back(s, rtt(rng));
  for (int e = 0; e < events; ++e) trace.reordering_events.push_back(std::floor(when(rng)));
  std::sort(trace.reordering_events.begin(), trace.reordering_events.end());
  trace.end_time = seconds;
  return trace;
}

}  // namespace

TEST(Bdp, Examples) {
  const TcpParams p;
  EXPECT_EQ(bdp(0.12, p), 10000U);
  EXPECT_EQ(bdp(0.000012, p), 1U);
  EXPECT_EQ(bdp(0.24, p), 2 * bdp(0.12, p));
  EXPECT_THROW(bdp(0.0, p), ParameterError);
}

TEST(Window, CongestionAvoidanceAddsOnePerRtt) {
  TcpParams p;
  p.initial_ssthresh = 10;
  const auto w = simulate_window(constant(0.1, 10.0), p);
  EXPECT_EQ(w.samples.size(), 100U);
  EXPECT_EQ(w.final_cwnd, 110U);
  EXPECT_EQ(w.samples.back().cwnd, 109U);
}

TEST(Window, ArithmeticSeriesRate) {
  TcpParams p;
  p.initial_ssthresh = 10;
  const double rtt = 0.1;
  const int steps = 100;
  const auto w = simulate_window(constant(rtt, steps * rtt), p);
  const double closed = p.mss_bytes * 8.0 / rtt * (10.0 + (steps - 1) / 2.0);
  EXPECT_NEAR(closed, 7.14e6, 1.0);
  EXPECT_NEAR(w.average_rate_bps, closed, 0.01 * closed);
}

// Slow start doubles from 10 until the BDP cap binds; the long-run average
// approaches the cap rate.
TEST(Window, SlowStartConvergesToCap) {
  TcpParams p;
  const double rtt = 0.05;
  const auto cap = bdp(rtt, p);
  ASSERT_EQ(cap, 4166U);
  const int steps = 20000;
  const auto w = simulate_window(constant(rtt, steps * rtt), p);
  // 10, 20, ..., 2560 then capped.
  double sum = 0.0;
  std::uint64_t win = 10;
  for (int i = 0; i < steps; ++i) {
    sum += static_cast<double>(std::min<std::uint64_t>(win, cap));
    win = std::min<std::uint64_t>(2 * win, cap);
  }
  const double closed = sum / steps * p.mss_bytes * 8.0 / rtt;
  EXPECT_NEAR(w.average_rate_bps, closed, 0.01 * closed);
  EXPECT_NEAR(w.average_rate_bps, cap * p.mss_bytes * 8.0 / rtt, 0.01 * cap * p.mss_bytes * 8.0 / rtt);
}

TEST(Window, EventHalves) {
  TcpParams p;
  p.initial_window = 64;
  p.initial_ssthresh = 64;
  const auto w = simulate_window(constant(0.1, 1.0, {0.05}), p);
  ASSERT_GE(w.samples.size(), 2U);
  EXPECT_EQ(w.samples[0].window, 64U);
  EXPECT_EQ(w.samples[1].cwnd, 32U);
  // Back in congestion avoidance afterwards.
  EXPECT_EQ(w.samples[2].cwnd, 33U);
}

TEST(Window, FloorOfTwo) {
  TcpParams p;
  p.initial_window = 3;
  const auto w = simulate_window(constant(0.1, 1.0, {0.01, 0.11, 0.21, 0.31}), p);
  for (const auto& s : w.samples) {
    EXPECT_GE(s.window, 2U);
    EXPECT_GE(s.cwnd, 2U);
  }
}

TEST(Window, EmptyTrace) {
  const auto w = simulate_window({}, TcpParams{});
  EXPECT_TRUE(w.samples.empty());
  EXPECT_EQ(w.average_rate_bps, 0.0);
}

TEST(Window, InvalidParams) {
  TcpParams p;
  p.mss_bytes = 0.0;
  EXPECT_THROW(simulate_window(constant(0.1, 1.0), p), ParameterError);
}

TEST(Window, RandomTraceInvariants) {
  std::mt19937_64 rng(8);
  const TcpParams p;
  for (int trial = 0; trial < 50; ++trial) {
    const auto trace = random_trace(rng, 300, trial % 12);
    const auto w = simulate_window(trace, p);
    std::size_t ev = 0;
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
      const auto& s = w.samples[i];
      const auto cap = std::max<std::uint64_t>(bdp(s.rtt, p), p.min_window);
      EXPECT_GE(s.window, 2U);
      EXPECT_LE(s.window, cap);
      if (i == 0) continue;
      const auto& prev = w.samples[i - 1];
      bool event = false;
      while (ev < trace.reordering_events.size() && trace.reordering_events[ev] < s.t - 1e-9) {
        event = event || trace.reordering_events[ev] >= prev.t - 1e-9;
        ++ev;
      }
      if (!event) {
        EXPECT_GE(s.cwnd, prev.cwnd);
      }
    }
  }
}

TEST(Window, RemovingAnEventNeverLowersRate) {
  std::mt19937_64 rng(21);
  const TcpParams p;
  for (int trial = 0; trial < 200; ++trial) {
    auto trace = random_trace(rng, 200, 1 + trial % 10);
    const double with = simulate_window(trace, p).average_rate_bps;
    std::uniform_int_distribution<std::size_t> pick(0, trace.reordering_events.size() - 1);
    trace.reordering_events.erase(trace.reordering_events.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
    EXPECT_GE(simulate_window(trace, p).average_rate_bps, with);
  }
}

TEST(Window, Deterministic) {
  std::mt19937_64 rng(4);
  const auto trace = random_trace(rng, 500, 7);
  const auto a = simulate_window(trace, TcpParams{});
  const auto b = simulate_window(trace, TcpParams{});
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].t, b.samples[i].t);
    EXPECT_EQ(a.samples[i].window, b.samples[i].window);
  }
  EXPECT_EQ(a.average_rate_bps, b.average_rate_bps);
}

TEST(DeriveTrace, RttAndEvents) {
  RouteSchedule schedule{{0.0, 1.0, 4}, {}};
  ScheduleMetrics m;
  m.delay_series = {{0.0, 0.05}, {1.0, 0.05}, {2.0, 0.04}, {3.0, 0.06}};
  m.changes = {{2.0, 0.05, 0.04, -0.01, true}, {3.0, 0.04, 0.06, 0.02, false}};
  const auto trace = derive_trace(schedule, m);
  ASSERT_EQ(trace.rtt_series.size(), 4U);
  EXPECT_DOUBLE_EQ(trace.rtt_series[0].second, 0.1);
  EXPECT_EQ(trace.reordering_events, (std::vector<double>{2.0}));
  EXPECT_EQ(trace.end_time, 4.0);

  m.changes.clear();
  EXPECT_TRUE(derive_trace(schedule, m).reordering_events.empty());
}
