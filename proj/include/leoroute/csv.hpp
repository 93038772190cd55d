#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "leoroute/artcp.hpp"
#include "leoroute/errors.hpp"
#include "leoroute/experiments.hpp"
#include "leoroute/metrics.hpp"
#include "leoroute/schedule.hpp"

namespace leoroute::csv {

// Every file starts with this line, then a header row. Numbers use '.' as
// decimal separator and no grouping.
inline constexpr std::string_view kSchemaLine = "# schema=1\n";

inline std::string format_path(const Route& route) {
  std::string out;
  for (std::size_t i = 0; i < route.satellites.size(); ++i) {
    if (i) out += ' ';
    out += fmt::format("{}.{}", route.satellites[i].plane, route.satellites[i].slot);
  }
  return out;
}

// t_start_s,t_end_s,src_plane,src_slot,dst_plane,dst_slot,hop_count,owd_start_ms,path
// `path` lists every satellite of the route as plane.slot, space separated.
inline std::string schedule_csv(const RouteSchedule& schedule, const ScheduleMetrics& metrics) {
  std::string out{kSchemaLine};
  out += "t_start_s,t_end_s,src_plane,src_slot,dst_plane,dst_slot,hop_count,owd_start_ms,path\n";
  for (const auto& e : schedule.entries) {
    const auto k = static_cast<std::size_t>(e.samples.begin);
    const double owd = k < metrics.delay_series.size() ? metrics.delay_series[k].second : 0.0;
    out += fmt::format("{},{},{},{},{},{},{},{:.6f},{}\n", schedule.grid.at(e.samples.begin),
                       schedule.grid.at(e.samples.end), e.route.src_access().plane,
                       e.route.src_access().slot, e.route.dst_access().plane, e.route.dst_access().slot,
                       e.route.isl_hops(), owd * 1e3, format_path(e.route));
  }
  return out;
}

// t_s,owd_ms_<algorithm>... for the algorithms given (same grid).
inline std::string metrics_csv(const std::vector<std::pair<Algorithm, const ScheduleMetrics*>>& runs) {
  std::string out{kSchemaLine};
  out += "t_s";
  for (const auto& [a, m] : runs) out += fmt::format(",owd_ms_{}", algorithm_name(a));
  out += '\n';
  if (runs.empty()) return out;
  const std::size_t n = runs.front().second->delay_series.size();
  for (std::size_t i = 0; i < n; ++i) {
    out += fmt::format("{}", runs.front().second->delay_series[i].first);
    for (const auto& [a, m] : runs) out += fmt::format(",{:.6f}", m->delay_series[i].second * 1e3);
    out += '\n';
  }
  return out;
}

// t_s,algorithm,delta_ms,bad
inline std::string changes_csv(const std::vector<std::pair<Algorithm, const ScheduleMetrics*>>& runs) {
  std::string out{kSchemaLine};
  out += "t_s,algorithm,delta_ms,bad\n";
  for (const auto& [a, m] : runs) {
    for (const auto& c : m->changes) {
      out += fmt::format("{},{},{:.6f},{}\n", c.t, algorithm_name(a), c.delta * 1e3, c.bad ? 1 : 0);
    }
  }
  return out;
}

// t_s,window_segments,rtt_ms,rate_mbps
inline std::string window_csv(const WindowTrace& trace, const TcpParams& tcp) {
  std::string out{kSchemaLine};
  out += "t_s,window_segments,rtt_ms,rate_mbps\n";
  for (const auto& s : trace.samples) {
    const double rate = static_cast<double>(s.window) * tcp.mss_bytes * 8.0 / s.rtt;
    out += fmt::format("{:.6f},{},{:.6f},{:.6f}\n", s.t, s.window, s.rtt * 1e3, rate / 1e6);
  }
  return out;
}

// t_s,rtt_ms,reorder ; the trace ends one sample spacing after the last row.
inline std::string trace_csv(const TransportTrace& trace) {
  std::string out{kSchemaLine};
  out += "t_s,rtt_ms,reorder\n";
  std::size_t ev = 0;
  for (const auto& [t, rtt] : trace.rtt_series) {
    int reorder = 0;
    while (ev < trace.reordering_events.size() && trace.reordering_events[ev] <= t + 1e-9) {
      ++reorder;
      ++ev;
    }
    out += fmt::format("{},{:.9f},{}\n", t, rtt * 1e3, reorder);
  }
  return out;
}

// src_lat,src_lon,dst_lat,dst_lon,algorithm,mean_owd_ms,mean_validity_s,changes,bad_changes,avg_rate_mbps,wall_time_s
inline std::string grid_csv(const std::vector<PairResult>& results) {
  std::string out{kSchemaLine};
  out += "src_lat,src_lon,dst_lat,dst_lon,algorithm,mean_owd_ms,mean_validity_s,changes,bad_changes,"
         "avg_rate_mbps,wall_time_s\n";
  for (const auto& r : results) {
    if (!r.ok) continue;
    for (Algorithm a : kAllAlgorithms) {
      const auto& s = r[a];
      out += fmt::format("{},{},{},{},{},{:.6f},{:.3f},{},{},{:.6f},{:.6f}\n", r.src.latitude_deg,
                         r.src.longitude_deg, r.dst.latitude_deg, r.dst.longitude_deg, algorithm_name(a),
                         s.mean_owd * 1e3, s.mean_validity, s.change_count, s.bad_change_count,
                         s.avg_rate_bps / 1e6, s.wall_time_s);
    }
  }
  return out;
}

// algorithm,metric,value,fraction
inline std::string cdf_csv(const std::map<Algorithm, CdfTables>& tables) {
  std::string out{kSchemaLine};
  out += "algorithm,metric,value,fraction\n";
  for (const auto& [a, t] : tables) {
    auto emit = [&](std::string_view metric, const auto& pts, double scale) {
      for (const auto& [v, f] : pts) {
        out += fmt::format("{},{},{:.6f},{:.6f}\n", algorithm_name(a), metric, v * scale, f);
      }
    };
    emit("mean_owd_ms", t.delay, 1e3);
    emit("mean_validity_s", t.validity, 1.0);
    emit("avg_rate_mbps", t.rate, 1e-6);
  }
  return out;
}

// pair_index,algorithm,wall_time_s
inline std::string bench_raw_csv(const BenchmarkTable& table) {
  std::string out{kSchemaLine};
  out += "pair_index,algorithm,wall_time_s\n";
  for (Algorithm a : kAllAlgorithms) {
    const auto& raw = table.raw[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < raw.size(); ++i) {
      out += fmt::format("{},{},{}\n", i, algorithm_name(a), raw[i]);
    }
  }
  return out;
}

// algorithm,min,q1,median,q3,max
inline std::string bench_summary_csv(const BenchmarkTable& table) {
  std::string out{kSchemaLine};
  out += "algorithm,min,q1,median,q3,max\n";
  for (Algorithm a : kAllAlgorithms) {
    const auto& s = table[a];
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", algorithm_name(a), s.min, s.q1,
                       s.median, s.q3, s.max);
  }
  return out;
}

// station,plane,slot,t_start_s,t_end_s,direction
inline std::string windows_csv(const std::string& station, const std::vector<VisibilityWindow>& windows,
                               const TimeGrid& grid) {
  std::string out{kSchemaLine};
  out += "station,plane,slot,t_start_s,t_end_s,direction\n";
  for (const auto& w : windows) {
    out += fmt::format("{},{},{},{},{},{}\n", station, w.satellite.plane, w.satellite.slot,
                       grid.at(w.samples.begin), grid.at(w.samples.end),
                       w.direction_at_start == Direction::ascending ? "ascending" : "descending");
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Data rows of a CSV document after checking its header.
inline std::vector<std::vector<std::string>> rows(std::string_view text, std::string_view header,
                                                  std::string_view what) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  std::vector<std::vector<std::string>> out;
  int line_no = 0;
  const std::size_t columns = split(header).size();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      if (line != header) {
        throw ConfigError(fmt::format("{}: line {}: expected header '{}'", what, line_no, header));
      }
      have_header = true;
      continue;
    }
    auto fields = split(line);
    if (fields.size() != columns) {
      throw ConfigError(fmt::format("{}: line {}: expected {} fields, got {}", what, line_no, columns,
                                    fields.size()));
    }
    out.push_back(std::move(fields));
  }
  if (!have_header) throw ConfigError(fmt::format("{}: missing header", what));
  return out;
}

inline double to_double(const std::string& s, std::string_view what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  }
}

inline int to_int(const std::string& s, std::string_view what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", what, s));
  }
}

}  // namespace detail

// Rebuilds a schedule written by schedule_csv on the given grid.
inline RouteSchedule read_schedule_csv(std::string_view text, const TimeGrid& grid) {
  RouteSchedule schedule{grid, {}};
  for (const auto& f : detail::rows(
           text, "t_start_s,t_end_s,src_plane,src_slot,dst_plane,dst_slot,hop_count,owd_start_ms,path",
           "schedule")) {
    auto index = [&](const std::string& s) {
      const double k = (detail::to_double(s, "schedule") - grid.t0) / grid.step;
      const double r = std::round(k);
      if (std::abs(k - r) > 1e-6) throw ConfigError(fmt::format("schedule time {} is off the sampling grid", s));
      return static_cast<std::int64_t>(r);
    };
    ScheduleEntry e;
    e.samples = {index(f[0]), index(f[1])};
    for (const auto& hop : detail::split(f[8], ' ')) {
      const auto dot = hop.find('.');
      if (dot == std::string::npos) throw ConfigError(fmt::format("schedule: bad path element '{}'", hop));
      e.route.satellites.push_back(
          {detail::to_int(hop.substr(0, dot), "schedule"), detail::to_int(hop.substr(dot + 1), "schedule")});
    }
    if (e.route.satellites.empty()) throw ConfigError("schedule: empty path");
    e.route.computed_at = grid.at(e.samples.begin);
    schedule.entries.push_back(std::move(e));
  }
  if (!schedule.partitions_horizon()) {
    throw ConfigError("schedule does not partition the configured horizon");
  }
  return schedule;
}

inline TransportTrace read_trace_csv(std::string_view text) {
  TransportTrace trace;
  for (const auto& f : detail::rows(text, "t_s,rtt_ms,reorder", "trace")) {
    const double t = detail::to_double(f[0], "trace");
    const double rtt = detail::to_double(f[1], "trace") * 1e-3;
    if (!(rtt > 0.0)) throw ConfigError("trace: rtt must be positive");
    if (!trace.rtt_series.empty() && t <= trace.rtt_series.back().first) {
      throw ConfigError("trace: times must be strictly increasing");
    }
    trace.rtt_series.emplace_back(t, rtt);
    for (int i = detail::to_int(f[2], "trace"); i > 0; --i) trace.reordering_events.push_back(t);
  }
  const auto n = trace.rtt_series.size();
  if (n == 0) throw ConfigError("trace: no samples");
  const double spacing = n > 1 ? trace.rtt_series[n - 1].first - trace.rtt_series[n - 2].first : 1.0;
  trace.end_time = trace.rtt_series.back().first + spacing;
  return trace;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path));
  out << content;
}

}  // namespace leoroute::csv
