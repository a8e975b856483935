#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rnplan/ap_planner.hpp"
#include "rnplan/infection.hpp"
#include "rnplan/io.hpp"
#include "rnplan/ntbn_planner.hpp"

namespace rnplan {

/// Everything a run needs. Paths are absolute once loaded.
struct Scenario {
  std::filesystem::path population;
  std::filesystem::path backhaul_nodes;
  PlanConfig plan;
  InfectionParams infection;
  std::vector<std::size_t> ntbn_counts{0, 1, 2, 3, 4};
  PlacementStrategy ntbn_strategy = PlacementStrategy::weighted_farthest_kmeans;
  // Manual NTBN sites in input coordinates: (lat, lon) or (x, y).
  std::vector<std::pair<double, double>> ntbn_sites;
  bool normalize = true;           // run the dynamics in the unit square
  std::size_t trace_stride = 1;    // dynamics.csv keeps every n-th step
  std::size_t oracle_max_aps = 2000;
};

/// Flat `key = value` document (INI/TOML subset, `#` or `;` comments).
/// Recognized keys mirror Scenario: population, backhaul_nodes, radius, kappa,
/// seed, k0, raster_resolution, alpha, beta, gamma, delta, max_steps,
/// ntbn_counts (comma list), ntbn_strategy, ntbn_sites ("a b; a b"),
/// normalize, trace_stride, oracle_max_aps. Relative paths resolve against the
/// file's directory. Throws ConfigError.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir);

/// Population and backhaul nodes mapped into one planar frame (the
/// population's weighted centroid is the projection origin).
struct ScenarioData {
  io::CoordinateSystem coordinates;
  std::vector<PlanarPoint> users;
  std::vector<BackhaulNode> terrestrial_bns;
  std::size_t dropped_rows = 0;
};

ScenarioData load_data(const Scenario& scenario);

/// Frame the dynamics run in: unit square over APs and terrestrial BNs when
/// normalizing, identity otherwise.
UnitFrame dynamics_frame(const Scenario& scenario, const APSet& aps,
                         std::span<const BackhaulNode> bns);

/// Throws ConfigError if the worst-case capture time exceeds max_steps.
void check_step_budget(const InfectionParams& params, const UnitFrame& frame, const APSet& aps,
                       std::span<const BackhaulNode> bns);

struct PipelineResult {
  ScenarioData data;
  APPlan plan;
  UnitFrame frame;
  std::vector<SweepRow> sweep;
  std::optional<BackhaulGraph> oracle;  // optimal forest for the m = first row
  std::optional<double> gap_ratio;      // infection length / optimal length
};

/// Runs every stage and writes aps.geojson, search_trace.json,
/// graph_m{m}.geojson, graph_m{m}.dot, dynamics.csv, metrics.json and
/// report.md into `out_dir`. Stage failures surface as StageError after the
/// outputs of earlier stages are on disk.
PipelineResult run_pipeline(const Scenario& scenario, const std::filesystem::path& out_dir);

std::string render_report(const Scenario& scenario, const PipelineResult& result);

}  // namespace rnplan
