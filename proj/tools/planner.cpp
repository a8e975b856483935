// planner: command-line front end for AP planning and backhaul generation.
//
// Exit codes: 0 success, 2 configuration error, 3 stage failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rnplan/analytics.hpp"
#include "rnplan/errors.hpp"
#include "rnplan/io.hpp"
#include "rnplan/kernels.hpp"
#include "rnplan/pipeline.hpp"

namespace fs = std::filesystem;
using namespace rnplan;

namespace {

constexpr int kConfigError = 2;
constexpr int kStageError = 3;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string aps;
};

Scenario scenario_from(const CommonArgs& args) {
  Scenario s = load_scenario(args.config);
  if (args.seed) s.plan.seed = *args.seed;
  return s;
}

APSet obtain_aps(const Scenario& scenario, const ScenarioData& data, const std::string& aps_path,
                 const fs::path& out_dir) {
  if (!aps_path.empty()) {
    const io::PointTable table = io::ingest_population(aps_path, io::PointFormat::geojson);
    std::vector<PlanarPoint> centers = data.coordinates.to_planar(table);
    return APSet{std::move(centers), scenario.plan.radius};
  }
  APPlan plan = plan_aps(data.users, scenario.plan);
  io::write_file_atomic(out_dir / "aps.geojson", io::points_geojson(plan.aps.centers, data.coordinates));
  io::write_file_atomic(out_dir / "search_trace.json", io::search_trace_json(plan.trace));
  return plan.aps;
}

SweepRow backhaul_for(const Scenario& scenario, const ScenarioData& data, const APSet& aps,
                      std::size_t m, const fs::path& out_dir, bool write_dynamics) {
  const UnitFrame frame = dynamics_frame(scenario, aps, data.terrestrial_bns);
  check_step_budget(scenario.infection, frame, aps, data.terrestrial_bns);
  InfectionOptions options;
  options.frame = frame;
  options.trace_stride = scenario.trace_stride;
  options.record_trace = write_dynamics;

  NtbnPlan manual;
  const bool is_manual = scenario.ntbn_strategy == PlacementStrategy::manual;
  if (is_manual) {
    io::PointTable sites;
    sites.mode = data.coordinates.mode;
    for (const auto& [a, b] : scenario.ntbn_sites) {
      if (sites.mode == io::CoordinateMode::geographic) sites.geo.push_back({a, b, 1.0});
      else sites.planar.push_back({a, b, 1.0});
    }
    manual = manual_plan(data.coordinates.to_planar(sites));
  }
  const std::size_t ms[] = {m};
  auto rows = ntbn_sweep(aps, data.terrestrial_bns, ms, scenario.infection, scenario.plan.seed,
                         options, is_manual ? &manual : nullptr);
  SweepRow row = std::move(rows.front());

  const std::string stem = "graph_m" + std::to_string(m);
  io::write_file_atomic(out_dir / (stem + ".geojson"),
                        io::graph_geojson(row.infection.graph, data.coordinates));
  io::write_file_atomic(out_dir / (stem + ".dot"), io::graph_dot(row.infection.graph));
  io::write_file_atomic(out_dir / ("metrics_m" + std::to_string(m) + ".json"),
                        io::sweep_json(std::span<const SweepRow>(&row, 1), data.coordinates));
  if (write_dynamics)
    io::write_file_atomic(out_dir / "dynamics.csv", io::dynamics_csv(row.infection.trace, frame.scale));
  return row;
}

template <class F>
int guarded(F&& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const StageError& e) {
    std::cerr << "stage '" << e.stage() << "' failed: " << e.what() << "\n";
    return kStageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStageError;
  }
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_aps) {
  cmd->add_option("--config", args.config, "Scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Seed (overrides the scenario's seed)");
  cmd->add_option("--out", args.out, "Output directory")->required();
  if (with_aps)
    cmd->add_option("--aps", args.aps, "Reuse an aps.geojson instead of planning")
        ->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rural network planner: AP placement and backhaul generation"};
  app.require_subcommand(1);

  CommonArgs pipeline_args, plan_args, backhaul_args, ntbn_args, oracle_args;
  std::size_t ntbn_m = 1;
  std::string graph_path, analyze_out;

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write the full bundle");
  add_common(pipeline, pipeline_args, false);
  auto* plan = app.add_subcommand("plan-aps", "Choose the number and positions of APs");
  add_common(plan, plan_args, false);
  auto* backhaul = app.add_subcommand("gen-backhaul", "Connect APs to terrestrial backhaul nodes");
  add_common(backhaul, backhaul_args, true);
  auto* ntbn = app.add_subcommand("add-ntbn", "Add non-terrestrial backhaul nodes and regenerate");
  add_common(ntbn, ntbn_args, true);
  ntbn->add_option("--m", ntbn_m, "Number of non-terrestrial backhaul nodes")->required();
  auto* analyze_cmd = app.add_subcommand("analyze", "Network metrics of a graph GeoJSON");
  analyze_cmd->add_option("--graph", graph_path, "graph_m*.geojson")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--out", analyze_out, "Write metrics JSON here instead of stdout");
  auto* oracle = app.add_subcommand("oracle", "Minimum spanning forest and optimality gap");
  add_common(oracle, oracle_args, true);
  app.add_subcommand("simd", "Print the distance-kernel ISA in use");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (pipeline->parsed()) {
    return guarded([&] {
      const Scenario s = scenario_from(pipeline_args);
      const PipelineResult r = run_pipeline(s, pipeline_args.out);
      std::cout << "k* = " << r.plan.trace.k_star << ", rho* = " << r.plan.trace.rho_star
                << ", outputs in " << pipeline_args.out << "\n";
    });
  }
  if (plan->parsed()) {
    return guarded([&] {
      const Scenario s = scenario_from(plan_args);
      fs::create_directories(plan_args.out);
      const ScenarioData data = load_data(s);
      const APSet aps = obtain_aps(s, data, "", plan_args.out);
      std::cout << "planned " << aps.k() << " APs\n";
    });
  }
  if (backhaul->parsed() || ntbn->parsed()) {
    const bool is_ntbn = ntbn->parsed();
    const CommonArgs& args = is_ntbn ? ntbn_args : backhaul_args;
    return guarded([&] {
      const Scenario s = scenario_from(args);
      fs::create_directories(args.out);
      const ScenarioData data = load_data(s);
      const APSet aps = obtain_aps(s, data, args.aps, args.out);
      const SweepRow row = backhaul_for(s, data, aps, is_ntbn ? ntbn_m : 0, args.out, !is_ntbn);
      std::cout << row.infection.graph.edges.size() << " backhaul edges, total length "
                << row.metrics.total_backhaul_length << " m\n";
    });
  }
  if (analyze_cmd->parsed()) {
    return guarded([&] {
      const BackhaulGraph graph = io::parse_graph_geojson(io::read_file(graph_path));
      const std::string text = io::metrics_json(analyze(graph), graph);
      if (analyze_out.empty()) std::cout << text;
      else io::write_file_atomic(analyze_out, text);
    });
  }
  if (oracle->parsed()) {
    return guarded([&] {
      const Scenario s = scenario_from(oracle_args);
      fs::create_directories(oracle_args.out);
      const ScenarioData data = load_data(s);
      const APSet aps = obtain_aps(s, data, oracle_args.aps, oracle_args.out);
      const BackhaulGraph best = optimal_forest(aps.centers, data.terrestrial_bns);
      io::write_file_atomic(fs::path(oracle_args.out) / "oracle_forest.geojson",
                            io::graph_geojson(best, data.coordinates));
      const SweepRow row = backhaul_for(s, data, aps, 0, oracle_args.out, false);
      const double optimal = total_backhaul_length(best);
      std::cout << "optimal forest length " << optimal << " m, infection length "
                << row.metrics.total_backhaul_length << " m, ratio "
                << (optimal > 0 ? row.metrics.total_backhaul_length / optimal : 1.0) << "\n";
    });
  }
  std::cout << kernels::isa_name(kernels::active().isa) << "\n";
  return 0;
}
