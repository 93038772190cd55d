#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "leoroute/csv.hpp"
#include "leoroute/experiments.hpp"
#include "leoroute/scenario.hpp"
#include "leoroute/setcover.hpp"

namespace {

using namespace leoroute;

enum ExitCode : int { kOk = 0, kUsage = 1, kScenario = 2, kInfeasible = 3 };

struct GlobalOptions {
  std::string config;
  std::uint64_t seed = 0;  // reserved: every pipeline stage is deterministic
  std::string output = ".";
  std::optional<double> step;
  std::string horizon;
};

ScenarioConfig load(const GlobalOptions& g) {
  ScenarioConfig cfg = parse_config(g.config);
  if (g.step) {
    if (!(*g.step > 0.0)) throw ConfigError("--step must be positive");
    cfg.step_s = *g.step;
  }
  if (g.horizon == "period") {
    cfg.horizon_s.reset();
  } else if (!g.horizon.empty()) {
    const auto h = leoroute::detail::parse_number<double>(g.horizon);
    if (!h || !(*h > 0.0)) throw ConfigError(fmt::format("--horizon must be seconds or 'period', got '{}'", g.horizon));
    cfg.horizon_s = *h;
  }
  return cfg;
}

std::string out_path(const GlobalOptions& g, const std::string& name) {
  std::filesystem::create_directories(g.output);
  return (std::filesystem::path(g.output) / name).string();
}

std::pair<GroundStation, GroundStation> resolve_pair(const ScenarioConfig& cfg, const std::string& src,
                                                     const std::string& dst) {
  const std::string s = src.empty() ? cfg.src : src;
  const std::string d = dst.empty() ? cfg.dst : dst;
  if (s.empty() || d.empty()) throw ConfigError("no ground-station pair: pass --src/--dst or set pair.src/pair.dst");
  return {cfg.station(s), cfg.station(d)};
}

int cmd_route(const GlobalOptions& g, const std::string& src_name, const std::string& dst_name,
              const std::string& algorithm) {
  const auto cfg = load(g);
  const auto [src, dst] = resolve_pair(cfg, src_name, dst_name);
  std::vector<Algorithm> algorithms;
  if (algorithm == "all") {
    algorithms.assign(kAllAlgorithms.begin(), kAllAlgorithms.end());
  } else if (const auto a = parse_algorithm(algorithm)) {
    algorithms.push_back(*a);
  } else {
    throw CLI::ValidationError("--algorithm", fmt::format("unknown algorithm '{}'", algorithm));
  }

  const IslGraph graph(cfg.constellation, cfg.seam);
  const TimeGrid grid = cfg.grid();
  std::vector<AlgorithmRun> runs;
  for (Algorithm a : algorithms) runs.push_back(run_algorithm(a, graph, src, dst, cfg.delay, cfg.tcp, grid));

  std::vector<std::pair<Algorithm, const ScheduleMetrics*>> refs;
  fmt::print("{:<10} {:>8} {:>5} {:>11} {:>11} {:>12} {:>11} {:>9}\n", "algorithm", "changes", "bad",
             "median_ms", "mean_ms", "validity_s", "rate_mbps", "wall_s");
  for (const auto& r : runs) {
    const auto name = std::string(algorithm_name(r.algorithm));
    csv::write_file(out_path(g, fmt::format("schedule_{}.csv", name)), csv::schedule_csv(r.schedule, r.metrics));
    csv::write_file(out_path(g, fmt::format("trace_{}.csv", name)), csv::trace_csv(r.trace));
    refs.emplace_back(r.algorithm, &r.metrics);
    fmt::print("{:<10} {:>8} {:>5} {:>11.3f} {:>11.3f} {:>12.1f} {:>11.3f} {:>9.3f}\n", name,
               r.metrics.change_count, r.metrics.bad_change_count, r.metrics.median_owd * 1e3,
               r.metrics.mean_owd * 1e3, mean(r.metrics.validity_durations),
               r.window.average_rate_bps / 1e6, r.wall_time_s);
  }
  csv::write_file(out_path(g, "metrics.csv"), csv::metrics_csv(refs));
  csv::write_file(out_path(g, "changes.csv"), csv::changes_csv(refs));
  return kOk;
}

int cmd_simulate(const GlobalOptions& g, const std::string& schedule_path, const std::string& trace_path,
                 const std::string& src_name, const std::string& dst_name, const std::string& out_name) {
  if (schedule_path.empty() == trace_path.empty()) {
    throw CLI::ValidationError("simulate", "pass exactly one of --schedule or --trace");
  }
  const auto cfg = load(g);
  TransportTrace trace;
  if (!trace_path.empty()) {
    trace = csv::read_trace_csv(csv::read_file(trace_path));
  } else {
    const auto [src, dst] = resolve_pair(cfg, src_name, dst_name);
    const IslGraph graph(cfg.constellation, cfg.seam);
    const auto schedule = csv::read_schedule_csv(csv::read_file(schedule_path), cfg.grid());
    const auto metrics = evaluate(graph, schedule, src, dst, cfg.delay);
    trace = derive_trace(schedule, metrics);
  }
  const auto window = simulate_window(trace, cfg.tcp);
  csv::write_file(out_path(g, out_name), csv::window_csv(window, cfg.tcp));
  fmt::print("reordering_events {}\naverage_rate_mbps {:.6f}\nmean_window_segments {:.3f}\nmean_bdp_segments {:.3f}\n",
             trace.reordering_events.size(), window.average_rate_bps / 1e6, window.mean_window, window.mean_bdp);
  return kOk;
}

int cmd_grid(const GlobalOptions& g, double lat_step, double lon_step, unsigned threads) {
  const auto cfg = load(g);
  GridSpec spec{lat_step > 0.0 ? lat_step : cfg.constellation.inclination_deg / 5.0, lon_step,
                cfg.constellation.inclination_deg};
  spec.validate(cfg.constellation.inclination_deg);
  const IslGraph graph(cfg.constellation, cfg.seam);
  const auto results =
      run_grid(graph, first_station_latitudes(spec), spec, cfg.delay, cfg.tcp, cfg.grid(), threads);
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (!r.ok) {
      ++failed;
      fmt::print(stderr, "skipped ({}, {}) -> ({}, {}): {}\n", r.src.latitude_deg, r.src.longitude_deg,
                 r.dst.latitude_deg, r.dst.longitude_deg, r.error);
    }
  }
  csv::write_file(out_path(g, "grid.csv"), csv::grid_csv(results));
  if (failed == results.size()) throw NoRouteError("no grid pair could be routed");
  csv::write_file(out_path(g, "cdf.csv"), csv::cdf_csv(aggregate_cdf(results)));
  fmt::print("pairs {} routed {} skipped {}\n", results.size(), results.size() - failed, failed);
  return kOk;
}

int cmd_bench(const GlobalOptions& g, std::size_t pairs_wanted, std::size_t repeat) {
  const auto cfg = load(g);
  GridSpec spec{cfg.constellation.inclination_deg / 5.0, 10.0, cfg.constellation.inclination_deg};
  const auto all = grid_pairs(first_station_latitudes(spec), spec);
  if (pairs_wanted == 0 || all.empty()) throw ConfigError("--pairs must be positive");
  std::vector<std::pair<GroundStation, GroundStation>> pairs;
  const std::size_t stride = std::max<std::size_t>(1, all.size() / pairs_wanted);
  for (std::size_t i = 0; i < all.size() && pairs.size() < pairs_wanted; i += stride) {
    for (std::size_t r = 0; r < std::max<std::size_t>(repeat, 1); ++r) pairs.push_back(all[i]);
  }
  const IslGraph graph(cfg.constellation, cfg.seam);
  const auto table = benchmark(graph, pairs, cfg.delay, cfg.grid());
  csv::write_file(out_path(g, "bench_raw.csv"), csv::bench_raw_csv(table));
  csv::write_file(out_path(g, "bench_summary.csv"), csv::bench_summary_csv(table));
  fmt::print("{:<10} {:>9} {:>9} {:>9} {:>9} {:>9}\n", "algorithm", "min", "q1", "median", "q3", "max");
  for (Algorithm a : kAllAlgorithms) {
    const auto& s = table[a];
    fmt::print("{:<10} {:>9.3f} {:>9.3f} {:>9.3f} {:>9.3f} {:>9.3f}\n", algorithm_name(a), s.min, s.q1,
               s.median, s.q3, s.max);
  }
  return kOk;
}

int cmd_export_ilp(const GlobalOptions& g, const std::string& src_name, const std::string& dst_name,
                   const std::string& out_name) {
  const auto cfg = load(g);
  const auto [src, dst] = resolve_pair(cfg, src_name, dst_name);
  const Constellation constellation(cfg.constellation);
  const auto instance = build_instance(src, dst, constellation, cfg.grid());
  csv::write_file(out_path(g, out_name), export_ilp(instance));
  fmt::print("elements {}\ntime_points {}\n", instance.elements.size(), instance.grid.count);
  const auto solution = solve_exact(instance);
  fmt::print("objective {}\n", solution.objective);
  return kOk;
}

int cmd_windows(const GlobalOptions& g, const std::string& station) {
  const auto cfg = load(g);
  const Constellation constellation(cfg.constellation);
  const TimeGrid grid = cfg.grid();
  std::string out{csv::kSchemaLine};
  out += "station,plane,slot,t_start_s,t_end_s,direction\n";
  std::size_t count = 0;
  for (const auto& gs : cfg.stations) {
    if (!station.empty() && gs.name != station) continue;
    const auto windows = visibility_windows(gs, constellation, grid);
    count += windows.size();
    const auto block = csv::windows_csv(gs.name, windows, grid);
    out += block.substr(block.find('\n', csv::kSchemaLine.size()) + 1);
  }
  if (!station.empty()) (void)cfg.station(station);
  csv::write_file(out_path(g, "windows.csv"), out);
  fmt::print("windows {}\n", count);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO constellation route selection and abstract TCP simulation"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "Scenario file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Reserved; all stages are deterministic");
  app.add_option("--output", g.output, "Output directory");
  app.add_option("--step", g.step, "Sampling step in seconds");
  app.add_option("--horizon", g.horizon, "Horizon in seconds, or 'period'");

  std::string src, dst, algorithm = "all", schedule, trace, out_name;
  double lat_step = 0.0, lon_step = 10.0;
  unsigned threads = 0;
  std::size_t pairs = 10, repeat = 1;

  auto* route = app.add_subcommand("route", "Run route selection on a ground-station pair");
  route->add_option("--src", src, "Source station name");
  route->add_option("--dst", dst, "Destination station name");
  route->add_option("--algorithm", algorithm, "dijkstra|stubborn|tenacious|setcover|all");

  auto* simulate = app.add_subcommand("simulate", "Abstract TCP simulation of a schedule or trace");
  simulate->add_option("--schedule", schedule, "Schedule CSV written by 'route'");
  simulate->add_option("--trace", trace, "Trace CSV (t_s,rtt_ms,reorder)");
  simulate->add_option("--src", src, "Source station (with --schedule)");
  simulate->add_option("--dst", dst, "Destination station (with --schedule)");
  simulate->add_option("--out", out_name, "Output file name")->default_val("window.csv");

  auto* grid = app.add_subcommand("grid", "Latitude/longitude grid sweep");
  grid->add_option("--lat-step", lat_step, "Latitude step in degrees (default inclination/5)");
  grid->add_option("--lon-step", lon_step, "Longitude step in degrees");
  grid->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* bench = app.add_subcommand("bench", "Route-selection run-time statistics");
  bench->add_option("--pairs", pairs, "Number of grid pairs");
  bench->add_option("--repeat", repeat, "Repetitions per pair");

  auto* ilp = app.add_subcommand("export-ilp", "Write the set-cover ILP of a pair in LP format");
  ilp->add_option("--src", src, "Source station name");
  ilp->add_option("--dst", dst, "Destination station name");
  ilp->add_option("--out", out_name, "Output file name")->default_val("setcover.lp");

  auto* windows = app.add_subcommand("windows", "Visibility windows of the scenario's stations");
  std::string station;
  windows->add_option("--station", station, "Only this station");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*route) return cmd_route(g, src, dst, algorithm);
    if (*simulate) return cmd_simulate(g, schedule, trace, src, dst, out_name);
    if (*grid) return cmd_grid(g, lat_step, lon_step, threads);
    if (*bench) return cmd_bench(g, pairs, repeat);
    if (*ilp) return cmd_export_ilp(g, src, dst, out_name);
    if (*windows) return cmd_windows(g, station);
  } catch (const CLI::ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const NoRouteError& e) {
    fmt::print(stderr, "infeasible: {}\n", e.what());
    return kInfeasible;
  } catch (const CoverError& e) {
    fmt::print(stderr, "infeasible: {}\n", e.what());
    return kInfeasible;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "scenario error: {}\n", e.what());
    return kScenario;
  } catch (const ParameterError& e) {
    fmt::print(stderr, "scenario error: {}\n", e.what());
    return kScenario;
  } catch (const VisibilityError& e) {
    fmt::print(stderr, "scenario error: {}\n", e.what());
    return kScenario;
  } catch (const TopologyError& e) {
    fmt::print(stderr, "scenario error: {}\n", e.what());
    return kScenario;
  }
  return kUsage;
}
