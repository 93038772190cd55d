#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "leoroute/errors.hpp"
#include "leoroute/orbital.hpp"
#include "leoroute/schedule.hpp"

namespace leoroute {

struct CoverElement {
  AccessPair pair;
  double weight = 1.0;
};

// Interval set cover over the sample points of `grid`. Element intervals are
// sample-index ranges; every sample point must be covered.
struct CoverInstance {
  TimeGrid grid;
  std::vector<CoverElement> elements;
};

struct CoverSolution {
  std::vector<std::size_t> selected;  // indices into CoverInstance::elements, by start
  double objective = 0.0;
};

// One element per pair of overlapping visibility windows, its interval being
// the overlap. Windows are maximal, so every element interval is maximal.
inline CoverInstance build_instance(const std::vector<VisibilityWindow>& src_windows,
                                    const std::vector<VisibilityWindow>& dst_windows,
                                    const TimeGrid& grid) {
  CoverInstance instance{grid, {}};
  for (const auto& a : src_windows) {
    for (const auto& b : dst_windows) {
      const Interval overlap = intersect(a.samples, b.samples);
      if (!overlap.empty()) instance.elements.push_back({{a.satellite, b.satellite, overlap}, 1.0});
    }
  }
  return instance;
}

inline CoverInstance build_instance(const GroundStation& src, const GroundStation& dst,
                                    const Constellation& constellation, const TimeGrid& grid) {
  return build_instance(visibility_windows(src, constellation, grid),
                        visibility_windows(dst, constellation, grid), grid);
}

namespace detail {

inline Interval clipped(const Interval& iv, std::int64_t count) {
  return {std::clamp<std::int64_t>(iv.begin, 0, count), std::clamp<std::int64_t>(iv.end, 0, count)};
}

// First sample index not covered by any element, or -1.
inline std::int64_t first_uncovered(const CoverInstance& instance,
                                    const std::vector<std::size_t>& subset) {
  const std::int64_t n = instance.grid.count;
  std::vector<int> diff(static_cast<std::size_t>(n + 1), 0);
  for (std::size_t i : subset) {
    const Interval iv = clipped(instance.elements[i].pair.samples, n);
    if (iv.empty()) continue;
    ++diff[static_cast<std::size_t>(iv.begin)];
    --diff[static_cast<std::size_t>(iv.end)];
  }
  int running = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    running += diff[static_cast<std::size_t>(k)];
    if (running <= 0) return k;
  }
  return -1;
}

}  // namespace detail

// Exact minimum-weight cover. The covering matrix has consecutive ones in
// every column, so a shortest path over prefix boundaries is optimal:
// best[k] is the cheapest set covering samples [0, k), and an element
// [b, e) extends any cover of [0, b) to one of [0, k) for b < k <= e.
// Equal-cost alternatives keep the element with the earliest start.
inline CoverSolution solve_exact(const CoverInstance& instance) {
  const std::int64_t n = instance.grid.count;
  std::vector<std::size_t> all(instance.elements.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (const auto k = detail::first_uncovered(instance, all); k >= 0) {
    throw CoverError(fmt::format("time point t={} (sample {}) is not covered by any access pair",
                                 instance.grid.at(k), k));
  }
  if (n == 0) return {};

  std::vector<std::size_t> order = all;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ia = instance.elements[a].pair.samples;
    const auto& ib = instance.elements[b].pair.samples;
    return std::pair(ia.begin, ia.end) < std::pair(ib.begin, ib.end);
  });

  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<double> best(static_cast<std::size_t>(n + 1), inf);
  std::vector<std::size_t> choice(static_cast<std::size_t>(n + 1), none);
  best[0] = 0.0;

  // Elements are visited by ascending start, so best[b] is final once the
  // first element starting at b is reached.
  for (std::size_t idx : order) {
    const auto& el = instance.elements[idx];
    const Interval iv = detail::clipped(el.pair.samples, n);
    if (iv.empty()) continue;
    const double base = best[static_cast<std::size_t>(iv.begin)];
    if (base == inf) continue;
    const double cost = base + el.weight;
    for (std::int64_t k = iv.begin + 1; k <= iv.end; ++k) {
      auto& slot = best[static_cast<std::size_t>(k)];
      if (cost < slot) {
        slot = cost;
        choice[static_cast<std::size_t>(k)] = idx;
      }
    }
  }

  CoverSolution solution;
  for (std::int64_t k = n; k > 0;) {
    const std::size_t idx = choice[static_cast<std::size_t>(k)];
    solution.selected.push_back(idx);
    solution.objective += instance.elements[idx].weight;
    k = instance.elements[idx].pair.samples.begin;
    if (k < 0) k = 0;
  }
  std::reverse(solution.selected.begin(), solution.selected.end());
  return solution;
}

inline bool verify_cover(const CoverInstance& instance, const CoverSolution& solution) {
  double total = 0.0;
  for (std::size_t i : solution.selected) {
    if (i >= instance.elements.size()) return false;
    total += instance.elements[i].weight;
  }
  if (std::abs(total - solution.objective) > 1e-9 * std::max(1.0, std::abs(total))) return false;
  return detail::first_uncovered(instance, solution.selected) < 0;
}

// CPLEX LP text. Grammar (one item per line, single-space indented):
//   \ interval set cover: <E> elements, <N> time points
//   Minimize
//    obj: <w0> x0 + <w1> x1 + ...
//   Subject To
//    t<k>: x<i> + x<j> + ... >= 1          one line per sample point k
//   Binary
//    x<i>                                   one line per element
//   End
// A sample point covered by no element is written as "t<k>: 0 x0 >= 1".
// Instances without elements have no constraint rows.
inline std::string export_ilp(const CoverInstance& instance) {
  const std::size_t m = instance.elements.size();
  const std::int64_t n = instance.grid.count;
  std::string out = fmt::format("\\ interval set cover: {} elements, {} time points\n", m, n);
  out += "Minimize\n obj:";
  for (std::size_t i = 0; i < m; ++i) {
    out += fmt::format("{} {} x{}", i == 0 ? "" : " +", instance.elements[i].weight, i);
  }
  out += "\nSubject To\n";
  if (m > 0) {
    std::vector<std::vector<std::size_t>> covering(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < m; ++i) {
      const Interval iv = detail::clipped(instance.elements[i].pair.samples, n);
      for (std::int64_t k = iv.begin; k < iv.end; ++k) covering[static_cast<std::size_t>(k)].push_back(i);
    }
    for (std::int64_t k = 0; k < n; ++k) {
      const auto& vars = covering[static_cast<std::size_t>(k)];
      out += fmt::format(" t{}:", k);
      if (vars.empty()) {
        out += " 0 x0";
      } else {
        for (std::size_t j = 0; j < vars.size(); ++j) {
          out += fmt::format("{} x{}", j == 0 ? "" : " +", vars[j]);
        }
      }
      out += " >= 1\n";
    }
  }
  out += "Binary\n";
  for (std::size_t i = 0; i < m; ++i) out += fmt::format(" x{}\n", i);
  out += "End\n";
  return out;
}

}  // namespace leoroute
