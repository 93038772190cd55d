#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "leoroute/artcp.hpp"
#include "leoroute/errors.hpp"
#include "leoroute/orbital.hpp"
#include "leoroute/topology.hpp"

namespace leoroute {

// Scenario file: UTF-8 text, one `key = value` per line, `#` starts a
// comment. Keys:
//
//   constellation.inclination_deg    required
//   constellation.total_sats         required
//   constellation.planes             required
//   constellation.phasing            required
//   constellation.altitude_km        required
//   constellation.min_elevation_deg  required
//   constellation.seam               phase_aligned (default) | same_slot
//   station.<name>                   <lat_deg>, <lon_deg>
//   delay.data_rate_bps              1e9
//   delay.packet_size_bytes          1500
//   delay.queueing_ms                1
//   tcp.mss_bytes                    1500
//   tcp.initial_window               10
//   tcp.initial_ssthresh             inf
//   tcp.bottleneck_rate_bps          1e9
//   tcp.min_window                   2
//   time.start_s                     0
//   time.step_s                      1
//   time.horizon                     period | <seconds>
//   pair.src, pair.dst               default station names
struct ScenarioConfig {
  WalkerParameters constellation;
  SeamLinking seam = SeamLinking::phase_aligned;
  std::vector<GroundStation> stations;
  DelayModel delay;
  TcpParams tcp;
  double start_s = 0.0;
  double step_s = 1.0;
  std::optional<double> horizon_s;  // empty: one orbital period
  std::string src;
  std::string dst;

  const GroundStation& station(std::string_view name) const {
    for (const auto& s : stations) {
      if (s.name == name) return s;
    }
    throw ConfigError(fmt::format("unknown ground station '{}'", name));
  }

  // One orbital period rounded up to a whole step, unless overridden.
  double horizon_length() const {
    if (horizon_s) return *horizon_s;
    return std::ceil(constellation.period() / step_s - 1e-9) * step_s;
  }

  TimeGrid grid() const { return TimeGrid::over(start_s, start_s + horizon_length(), step_s); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) return std::nullopt;
  }
  return value;
}

}  // namespace detail

inline ScenarioConfig parse_config_text(std::string_view text, std::string_view origin = "<scenario>") {
  ScenarioConfig cfg;
  std::map<std::string, int, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;

  auto fail = [&](int line, const std::string& msg) -> ConfigError {
    return ConfigError(fmt::format("{}:{}: {}", origin, line, msg));
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail(line_no, "expected 'key = value'");
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw fail(line_no, "empty key");
    if (value.empty()) throw fail(line_no, fmt::format("missing value for '{}'", key));
    if (!seen.emplace(key, line_no).second) throw fail(line_no, fmt::format("duplicate key '{}'", key));

    auto real = [&](double lo = -std::numeric_limits<double>::infinity()) {
      const auto v = detail::parse_number<double>(value);
      if (!v) throw fail(line_no, fmt::format("'{}' is not a number", value));
      if (*v < lo) throw fail(line_no, fmt::format("{} must be at least {}", key, lo));
      return *v;
    };
    auto positive = [&] {
      const double v = real();
      if (!(v > 0.0)) throw fail(line_no, fmt::format("{} must be positive", key));
      return v;
    };
    auto integer = [&](long long lo) {
      const auto v = detail::parse_number<long long>(value);
      if (!v) throw fail(line_no, fmt::format("'{}' is not an integer", value));
      if (*v < lo) throw fail(line_no, fmt::format("{} must be at least {}", key, lo));
      return *v;
    };

    if (key == "constellation.inclination_deg") {
      cfg.constellation.inclination_deg = real();
    } else if (key == "constellation.total_sats") {
      cfg.constellation.total_sats = static_cast<int>(integer(1));
    } else if (key == "constellation.planes") {
      cfg.constellation.planes = static_cast<int>(integer(1));
    } else if (key == "constellation.phasing") {
      cfg.constellation.phasing = static_cast<int>(integer(0));
    } else if (key == "constellation.altitude_km") {
      cfg.constellation.altitude_km = positive();
    } else if (key == "constellation.min_elevation_deg") {
      cfg.constellation.min_elevation_deg = real();
    } else if (key == "constellation.seam") {
      if (value == "phase_aligned") {
        cfg.seam = SeamLinking::phase_aligned;
      } else if (value == "same_slot") {
        cfg.seam = SeamLinking::same_slot;
      } else {
        throw fail(line_no, fmt::format("seam must be phase_aligned or same_slot, got '{}'", value));
      }
    } else if (key.starts_with("station.")) {
      const std::string name = key.substr(8);
      if (name.empty()) throw fail(line_no, "station name missing");
      const auto comma = value.find(',');
      if (comma == std::string_view::npos) throw fail(line_no, "station needs '<lat>, <lon>'");
      const auto lat = detail::parse_number<double>(value.substr(0, comma));
      const auto lon = detail::parse_number<double>(value.substr(comma + 1));
      if (!lat || !lon) throw fail(line_no, fmt::format("bad coordinates '{}'", value));
      if (*lat < -90.0 || *lat > 90.0) throw fail(line_no, "latitude outside [-90, 90]");
      if (*lon < -180.0 || *lon > 180.0) throw fail(line_no, "longitude outside [-180, 180]");
      cfg.stations.push_back({name, *lat, *lon});
    } else if (key == "delay.data_rate_bps") {
      cfg.delay.data_rate_bps = positive();
    } else if (key == "delay.packet_size_bytes") {
      cfg.delay.packet_size_bytes = positive();
    } else if (key == "delay.queueing_ms") {
      cfg.delay.queueing_s = positive() * 1e-3;
    } else if (key == "tcp.mss_bytes") {
      cfg.tcp.mss_bytes = positive();
    } else if (key == "tcp.initial_window") {
      cfg.tcp.initial_window = static_cast<std::uint64_t>(integer(1));
    } else if (key == "tcp.initial_ssthresh") {
      cfg.tcp.initial_ssthresh = value == "inf" ? std::numeric_limits<std::uint64_t>::max()
                                                : static_cast<std::uint64_t>(integer(1));
    } else if (key == "tcp.bottleneck_rate_bps") {
      cfg.tcp.bottleneck_rate_bps = positive();
    } else if (key == "tcp.min_window") {
      cfg.tcp.min_window = static_cast<std::uint64_t>(integer(1));
    } else if (key == "time.start_s") {
      cfg.start_s = real(0.0);
    } else if (key == "time.step_s") {
      cfg.step_s = positive();
    } else if (key == "time.horizon") {
      if (value == "period") {
        cfg.horizon_s.reset();
      } else {
        cfg.horizon_s = positive();
      }
    } else if (key == "pair.src") {
      cfg.src = std::string(value);
    } else if (key == "pair.dst") {
      cfg.dst = std::string(value);
    } else {
      throw fail(line_no, fmt::format("unknown key '{}'", key));
    }
  }

  static constexpr std::string_view required[] = {
      "constellation.inclination_deg", "constellation.total_sats",  "constellation.planes",
      "constellation.phasing",         "constellation.altitude_km", "constellation.min_elevation_deg"};
  for (auto k : required) {
    if (!seen.contains(k)) throw ConfigError(fmt::format("{}: missing required key '{}'", origin, k));
  }
  const auto& w = cfg.constellation;
  auto line_of = [&](std::string_view k) { return seen.find(k)->second; };
  if (w.total_sats % w.planes != 0) {
    throw fail(line_of("constellation.total_sats"),
               fmt::format("total_sats ({}) is not a multiple of planes ({})", w.total_sats, w.planes));
  }
  if (w.phasing >= w.planes) {
    throw fail(line_of("constellation.phasing"),
               fmt::format("phasing ({}) must be smaller than planes ({})", w.phasing, w.planes));
  }
  if (!(w.inclination_deg > 0.0 && w.inclination_deg <= 90.0)) {
    throw fail(line_of("constellation.inclination_deg"), "inclination must lie in (0, 90]");
  }
  if (!(w.min_elevation_deg >= 0.0 && w.min_elevation_deg < 90.0)) {
    throw fail(line_of("constellation.min_elevation_deg"), "min_elevation must lie in [0, 90)");
  }
  try {
    w.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  }
  for (std::size_t i = 0; i < cfg.stations.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.stations.size(); ++j) {
      if (cfg.stations[i].name == cfg.stations[j].name) {
        throw ConfigError(fmt::format("{}: duplicate station '{}'", origin, cfg.stations[i].name));
      }
    }
  }
  for (const char* k : {"pair.src", "pair.dst"}) {
    const std::string& name = std::string_view(k) == "pair.src" ? cfg.src : cfg.dst;
    if (!name.empty()) {
      try {
        (void)cfg.station(name);
      } catch (const ConfigError& e) {
        throw fail(seen.find(k)->second, e.what());
      }
    }
  }
  return cfg;
}

inline ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open scenario file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

}  // namespace leoroute
