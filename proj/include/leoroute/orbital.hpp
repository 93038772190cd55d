#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "leoroute/errors.hpp"

namespace leoroute {

namespace constants {
inline constexpr double earth_radius_km = 6371.0;
inline constexpr double mu_km3_s2 = 398600.4418;
inline constexpr double light_speed_km_s = 299792.458;
inline constexpr double earth_rotation_rad_s = 7.2921159e-5;
}  // namespace constants

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

// Angle between two vectors in radians, robust near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

// Walker Delta constellation i: T/P/F at a common altitude, plus the
// elevation mask ground stations apply to it.
struct WalkerParameters {
  double inclination_deg = 0.0;
  int total_sats = 0;
  int planes = 0;
  int phasing = 0;
  double altitude_km = 0.0;
  double min_elevation_deg = 0.0;

  int slots() const { return planes > 0 ? total_sats / planes : 0; }
  double semi_major_axis() const { return constants::earth_radius_km + altitude_km; }
  double mean_motion() const {
    const double a = semi_major_axis();
    return std::sqrt(constants::mu_km3_s2 / (a * a * a));
  }
  double period() const { return kTwoPi / mean_motion(); }

  void validate() const {
    if (planes <= 0 || total_sats <= 0 || total_sats % planes != 0) {
      throw ParameterError(fmt::format(
          "total_sats ({}) must be a positive multiple of planes ({})", total_sats, planes));
    }
    if (phasing < 0 || phasing >= planes) {
      throw ParameterError(fmt::format("phasing must lie in [0, {}), got {}", planes, phasing));
    }
    if (!(inclination_deg > 0.0 && inclination_deg <= 90.0)) {
      throw ParameterError(fmt::format("inclination must lie in (0, 90], got {}", inclination_deg));
    }
    if (!(altitude_km > 0.0)) {
      throw ParameterError(fmt::format("altitude must be positive, got {}", altitude_km));
    }
    if (!(min_elevation_deg >= 0.0 && min_elevation_deg < 90.0)) {
      throw ParameterError(
          fmt::format("min_elevation must lie in [0, 90), got {}", min_elevation_deg));
    }
  }
};

struct SatelliteId {
  int plane = 0;
  int slot = 0;

  friend auto operator<=>(const SatelliteId&, const SatelliteId&) = default;
};

// Uniform sampling grid t_k = t0 + k * step, k in [0, count).
struct TimeGrid {
  double t0 = 0.0;
  double step = 1.0;
  std::int64_t count = 0;

  double at(std::int64_t k) const { return t0 + static_cast<double>(k) * step; }
  double end() const { return at(count); }

  // Grid covering [t0, th); the last sample is the last grid point before th.
  static TimeGrid over(double t0, double th, double step) {
    if (!(step > 0.0)) throw ParameterError(fmt::format("step must be positive, got {}", step));
    if (!(th > t0)) throw ParameterError(fmt::format("empty horizon [{}, {})", t0, th));
    const auto n = static_cast<std::int64_t>(std::ceil((th - t0) / step - 1e-9));
    return TimeGrid{t0, step, std::max<std::int64_t>(n, 1)};
  }
};

// Half-open range of sample indices [begin, end).
struct Interval {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t length() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(std::int64_t k) const { return k >= begin && k < end; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.begin, b.begin), std::min(a.end, b.end)};
}

struct StateVector {
  Vec3 position;
  double argument_of_latitude = 0.0;  // radians in [0, 2pi)
};

struct GroundStation {
  std::string name;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

enum class Direction { ascending, descending };

struct VisibilityWindow {
  SatelliteId satellite;
  Interval samples;
  Direction direction_at_start = Direction::descending;
};

// Northbound iff d(latitude)/dt > 0, i.e. cos(u) > 0; cos(u) == 0 counts as
// descending. cos(pi/2) rounds to 6e-17, hence the small threshold.
inline bool ascending(double argument_of_latitude) { return std::cos(argument_of_latitude) > 1e-12; }

// Circular-orbit two-body model of a Walker Delta constellation. Satellite
// (p, q) has RAAN 2*pi*p/P and initial argument of latitude
// 2*pi*q/Q + 2*pi*F*p/(P*Q); satellite (0, 0) sits on its ascending node at
// t = 0, when the Greenwich meridian is aligned with the inertial x axis.
class Constellation {
 public:
  explicit Constellation(const WalkerParameters& params) : params_(params) {
    params_.validate();
    a_ = params_.semi_major_axis();
    n_ = params_.mean_motion();
    const double inc = deg2rad(params_.inclination_deg);
    sin_i_ = std::sin(inc);
    cos_i_ = std::cos(inc);
    const int P = params_.planes;
    const int Q = params_.slots();
    elements_.reserve(static_cast<std::size_t>(params_.total_sats));
    for (int p = 0; p < P; ++p) {
      for (int q = 0; q < Q; ++q) {
        const double raan = kTwoPi * p / P;
        const double u0 = kTwoPi * q / Q + kTwoPi * params_.phasing * p / (static_cast<double>(P) * Q);
        elements_.push_back({raan, u0, std::sin(raan), std::cos(raan)});
      }
    }
  }

  const WalkerParameters& params() const { return params_; }
  int size() const { return params_.total_sats; }
  int planes() const { return params_.planes; }
  int slots() const { return params_.slots(); }
  double semi_major_axis() const { return a_; }
  double mean_motion() const { return n_; }
  double period() const { return kTwoPi / n_; }

  int index(SatelliteId id) const {
    if (id.plane < 0 || id.plane >= planes() || id.slot < 0 || id.slot >= slots()) {
      throw ParameterError(fmt::format("satellite ({}, {}) out of range", id.plane, id.slot));
    }
    return id.plane * slots() + id.slot;
  }
  SatelliteId id(int index) const { return {index / slots(), index % slots()}; }

  double raan(SatelliteId id) const { return elements_[static_cast<std::size_t>(index(id))].raan; }
  double initial_argument_of_latitude(SatelliteId id) const {
    return elements_[static_cast<std::size_t>(index(id))].u0;
  }

  // Unwrapped argument of latitude u0 + n t.
  double raw_argument_of_latitude(int index, double t) const {
    return elements_[static_cast<std::size_t>(index)].u0 + n_ * t;
  }

  Vec3 position(int index, double t) const {
    const auto& e = elements_[static_cast<std::size_t>(index)];
    const double u = e.u0 + n_ * t;
    const double cu = std::cos(u);
    const double su = std::sin(u);
    return {a_ * (cu * e.cos_raan - su * cos_i_ * e.sin_raan),
            a_ * (cu * e.sin_raan + su * cos_i_ * e.cos_raan),
            a_ * (su * sin_i_)};
  }

  void positions(double t, std::vector<Vec3>& out) const {
    out.resize(static_cast<std::size_t>(size()));
    for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = position(i, t);
  }

  StateVector propagate(SatelliteId id, double t) const {
    const int i = index(id);
    double u = std::fmod(raw_argument_of_latitude(i, t), kTwoPi);
    if (u < 0.0) u += kTwoPi;
    return {position(i, t), u};
  }

  bool is_ascending(int index, double t) const { return ascending(raw_argument_of_latitude(index, t)); }
  bool is_ascending(SatelliteId id, double t) const { return is_ascending(index(id), t); }

 private:
  struct Elements {
    double raan;
    double u0;
    double sin_raan;
    double cos_raan;
  };

  WalkerParameters params_;
  double a_ = 0.0;
  double n_ = 0.0;
  double sin_i_ = 0.0;
  double cos_i_ = 0.0;
  std::vector<Elements> elements_;
};

inline Constellation build_constellation(const WalkerParameters& params) {
  return Constellation(params);
}

inline Vec3 ground_position(const GroundStation& gs, double t) {
  const double lat = deg2rad(gs.latitude_deg);
  const double lon = deg2rad(gs.longitude_deg) + constants::earth_rotation_rad_s * t;
  const double r = constants::earth_radius_km;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

// Elevation in degrees of `sat` seen from `ground` (both inertial, km).
inline double elevation_deg(const Vec3& ground, const Vec3& sat) {
  return 90.0 - rad2deg(angle_between(ground, sat - ground));
}

inline double elevation(const GroundStation& gs, const Constellation& constellation,
                        SatelliteId sat, double t) {
  return elevation_deg(ground_position(gs, t), constellation.position(constellation.index(sat), t));
}

inline bool is_visible(const Vec3& ground, const Vec3& sat, double min_elevation_deg) {
  return elevation_deg(ground, sat) >= min_elevation_deg;
}

// Largest Earth-central angle between a ground station and a sub-satellite
// point at which the satellite is still above the elevation mask.
inline double max_visible_central_angle(double semi_major_axis_km, double min_elevation_deg) {
  const double el = deg2rad(min_elevation_deg);
  return std::acos(constants::earth_radius_km / semi_major_axis_km * std::cos(el)) - el;
}

// Visibility windows of every satellite over `grid`, as maximal runs of
// samples above the elevation mask, sorted by (satellite, start).
inline std::vector<VisibilityWindow> visibility_windows(const GroundStation& gs,
                                                        const Constellation& constellation,
                                                        const TimeGrid& grid) {
  std::vector<VisibilityWindow> windows;
  const double min_el = constellation.params().min_elevation_deg;
  const double max_angle = max_visible_central_angle(constellation.semi_major_axis(), min_el);
  // Upper bound on how fast the central angle can shrink, per sample.
  const double angle_rate =
      1.001 * (constellation.mean_motion() + constants::earth_rotation_rad_s) * grid.step;
  constexpr double margin = 1e-6;

  std::vector<Vec3> ground(static_cast<std::size_t>(grid.count));
  for (std::int64_t k = 0; k < grid.count; ++k) {
    ground[static_cast<std::size_t>(k)] = ground_position(gs, grid.at(k));
  }

  for (int s = 0; s < constellation.size(); ++s) {
    std::int64_t run_start = -1;
    std::int64_t k = 0;
    while (k < grid.count) {
      const double t = grid.at(k);
      const Vec3 g = ground[static_cast<std::size_t>(k)];
      const Vec3 p = constellation.position(s, t);
      if (is_visible(g, p, min_el)) {
        if (run_start < 0) run_start = k;
        ++k;
        continue;
      }
      if (run_start >= 0) {
        windows.push_back({constellation.id(s), {run_start, k},
                           constellation.is_ascending(s, grid.at(run_start)) ? Direction::ascending
                                                                             : Direction::descending});
        run_start = -1;
      }
      const double excess = angle_between(g, p) - max_angle - margin;
      const auto skip = excess > 0.0 ? static_cast<std::int64_t>(std::floor(excess / angle_rate)) : 0;
      k += 1 + skip;
    }
    if (run_start >= 0) {
      windows.push_back({constellation.id(s), {run_start, grid.count},
                         constellation.is_ascending(s, grid.at(run_start)) ? Direction::ascending
                                                                           : Direction::descending});
    }
  }
  return windows;
}

inline double great_circle_distance(const GroundStation& a, const GroundStation& b) {
  return constants::earth_radius_km * angle_between(ground_position(a, 0.0), ground_position(b, 0.0));
}

}  // namespace leoroute
