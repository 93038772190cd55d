#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "leoroute/setcover.hpp"
#include "support.hpp"

using namespace leoroute;

namespace {

CoverInstance make(std::int64_t count, std::initializer_list<std::pair<std::int64_t, std::int64_t>> ivs) {
  CoverInstance inst{{0.0, 1.0, count}, {}};
  int i = 0;
  for (auto [b, e] : ivs) {
    inst.elements.push_back({{{0, i}, {1, i}, {b, e}}, 1.0});
    ++i;
  }
  return inst;
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

VisibilityWindow win(int sat, std::int64_t b, std::int64_t e) { return {{0, sat}, {b, e}, Direction::ascending}; }

}  // namespace

TEST(BuildInstance, SingleOverlap) {
  const TimeGrid grid{0.0, 1.0, 100};
  const auto inst = build_instance({win(1, 10, 50)}, {win(2, 30, 80)}, grid);
  ASSERT_EQ(inst.elements.size(), 1U);
  EXPECT_EQ(inst.elements[0].pair.samples, (Interval{30, 50}));
  EXPECT_EQ(inst.elements[0].pair.src_sat, (SatelliteId{0, 1}));
  EXPECT_EQ(inst.elements[0].pair.dst_sat, (SatelliteId{0, 2}));
  EXPECT_EQ(inst.elements[0].weight, 1.0);
}

TEST(BuildInstance, DisjointWindows) {
  const TimeGrid grid{0.0, 1.0, 100};
  EXPECT_TRUE(build_instance({win(1, 10, 30)}, {win(2, 30, 80)}, grid).elements.empty());
}

TEST(BuildInstance, StarlinkRecount) {
  const Constellation c(support::starlink());
  const auto grid = TimeGrid::over(0.0, std::ceil(c.period()), 1.0);
  const auto ws = visibility_windows(support::bariloche(), c, grid);
  const auto wd = visibility_windows(support::beijing(), c, grid);
  std::size_t expected = 0;
  for (const auto& a : ws) {
    for (const auto& b : wd) {
      expected += std::max(a.samples.begin, b.samples.begin) < std::min(a.samples.end, b.samples.end);
    }
  }
  const auto inst = build_instance(support::bariloche(), support::beijing(), c, grid);
  EXPECT_EQ(inst.elements.size(), expected);
  EXPECT_GT(expected, 100U);
  // Maximality: one step more at either end leaves one of the two windows.
  for (const auto& el : inst.elements) {
    const double mask = c.params().min_elevation_deg;
    auto both = [&](std::int64_t k) {
      if (k < 0 || k >= grid.count) return false;
      return elevation(support::bariloche(), c, el.pair.src_sat, grid.at(k)) >= mask &&
             elevation(support::beijing(), c, el.pair.dst_sat, grid.at(k)) >= mask;
    };
    EXPECT_FALSE(both(el.pair.samples.begin - 1));
    EXPECT_FALSE(both(el.pair.samples.end));
  }
}

TEST(SolveExact, WholeHorizonElement) {
  const auto inst = make(60, {{0, 60}});
  const auto sol = solve_exact(inst);
  EXPECT_EQ(sol.selected, (std::vector<std::size_t>{0}));
  EXPECT_EQ(sol.objective, 1.0);
  EXPECT_TRUE(verify_cover(inst, sol));
}

TEST(SolveExact, PrefersSingleLongElement) {
  const auto inst = make(120, {{0, 60}, {50, 120}, {0, 120}});
  const auto sol = solve_exact(inst);
  EXPECT_EQ(sol.selected, (std::vector<std::size_t>{2}));
  EXPECT_EQ(sol.objective, 1.0);
}

TEST(SolveExact, SortedByStart) {
  const auto inst = make(100, {{60, 100}, {0, 30}, {25, 70}});
  const auto sol = solve_exact(inst);
  EXPECT_EQ(sol.selected, (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_EQ(sol.objective, 3.0);
}

TEST(SolveExact, EmptyHorizon) {
  const auto sol = solve_exact(make(0, {}));
  EXPECT_TRUE(sol.selected.empty());
  EXPECT_EQ(sol.objective, 0.0);
}

TEST(SolveExact, RandomMatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + trial % 14;
    const bool unit = trial % 3 != 0;
    const auto inst = support::random_instance(rng, m, 600, true, unit);
    const double oracle = support::brute_force_cover(inst);
    ASSERT_TRUE(std::isfinite(oracle));
    const auto sol = solve_exact(inst);
    EXPECT_EQ(sol.objective, oracle) << "trial " << trial;
    EXPECT_TRUE(verify_cover(inst, sol));
    for (std::size_t i = 1; i < sol.selected.size(); ++i) {
      EXPECT_LE(inst.elements[sol.selected[i - 1]].pair.samples.begin,
                inst.elements[sol.selected[i]].pair.samples.begin);
    }
  }
}

TEST(SolveExact, AddingAnElementNeverHurts) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = support::random_instance(rng, 8, 300, true, trial % 2 == 0);
    const double before = solve_exact(inst).objective;
    const auto extra = support::random_instance(rng, 1, 300, false);
    inst.elements.push_back(extra.elements.front());
    EXPECT_LE(solve_exact(inst).objective, before);
  }
}

TEST(SolveExact, InfeasibilityNamesEarliestUncoveredPoint) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> pick(0, 299);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = support::random_instance(rng, 10, 300, true);
    const auto k = pick(rng);
    std::erase_if(inst.elements, [&](const CoverElement& e) { return e.pair.samples.contains(k); });
    std::int64_t first = -1;
    for (std::int64_t j = 0; j < 300 && first < 0; ++j) {
      bool hit = false;
      for (const auto& e : inst.elements) hit = hit || e.pair.samples.contains(j);
      if (!hit) first = j;
    }
    ASSERT_LE(first, k);
    try {
      (void)solve_exact(inst);
      FAIL() << "expected CoverError";
    } catch (const CoverError& e) {
      EXPECT_NE(std::string(e.what()).find(fmt::format("(sample {})", first)), std::string::npos) << e.what();
    }
  }
}

TEST(VerifyCover, RejectsBrokenSolutions) {
  const auto inst = make(100, {{0, 40}, {30, 100}, {35, 100}});
  auto sol = solve_exact(inst);
  EXPECT_TRUE(verify_cover(inst, sol));
  auto missing = sol;
  std::erase(missing.selected, std::size_t{0});
  missing.objective -= 1.0;
  EXPECT_FALSE(verify_cover(inst, missing));
  auto wrong = sol;
  wrong.objective += 0.5;
  EXPECT_FALSE(verify_cover(inst, wrong));
  auto bogus = sol;
  bogus.selected.push_back(42);
  EXPECT_FALSE(verify_cover(inst, bogus));
}

TEST(ExportIlp, OneElementCounts) {
  const auto inst = make(7, {{0, 7}});
  const std::string lp = export_ilp(inst);
  EXPECT_EQ(count_lines(lp, " t"), 7U);
  EXPECT_EQ(count_lines(lp, " x"), 1U);
  EXPECT_NE(lp.find(" obj: 1 x0\n"), std::string::npos);
  EXPECT_NE(lp.find(" t3: x0 >= 1\n"), std::string::npos);
}

TEST(ExportIlp, EmptyHorizon) {
  const std::string lp = export_ilp(make(0, {{0, 0}}));
  EXPECT_EQ(lp,
            "\\ interval set cover: 1 elements, 0 time points\n"
            "Minimize\n obj: 1 x0\nSubject To\nBinary\n x0\nEnd\n");
}

TEST(ExportIlp, ExactText) {
  auto inst = make(3, {{0, 2}, {1, 3}});
  inst.elements[1].weight = 2.5;
  EXPECT_EQ(export_ilp(inst),
            "\\ interval set cover: 2 elements, 3 time points\n"
            "Minimize\n"
            " obj: 1 x0 + 2.5 x1\n"
            "Subject To\n"
            " t0: x0 >= 1\n"
            " t1: x0 + x1 >= 1\n"
            " t2: x1 >= 1\n"
            "Binary\n x0\n x1\n"
            "End\n");
}
