#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rnplan/errors.hpp"
#include "rnplan/pipeline.hpp"

using namespace rnplan;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rnplan_pipeline_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void put(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Two villages 5 km apart in planar meters, one tower near the first.
fs::path two_villages(const fs::path& dir, const std::string& extra = "") {
  std::string users = "x,y,population\n";
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      users += std::to_string(i * 20) + "," + std::to_string(j * 20) + ",3\n";
      users += std::to_string(5000 + i * 20) + "," + std::to_string(j * 20) + ",2\n";
    }
  users += "2500,2500,0\n";
  put(dir / "users.csv", users);
  put(dir / "bns.csv", "x,y\n-300,0\n");
  put(dir / "scenario.ini",
      "population = users.csv\nbackhaul_nodes = bns.csv\nradius = 200\nseed = 3\n"
      "ntbn_counts = [0, 1, 2]\ntrace_stride = 10\n" + extra);
  return dir / "scenario.ini";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int planner(const std::string& args) {
  const std::string cmd = std::string(RNPLAN_PLANNER_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("parse_scenario: keys, defaults, comments") {
  const auto s = parse_scenario(
      "# comment\npopulation = pop.csv\nbackhaul_nodes = \"/abs/bns.geojson\"\nradius = 750\n"
      "; other comment\nkappa = 4\nseed = 99\nk0 = 12\nalpha = 0.02\nntbn_counts = 0, 2\n"
      "ntbn_strategy = manual\nntbn_sites = 1 2; 3 4\nnormalize = false\n",
      "/base");
  CHECK(s.population == fs::path("/base/pop.csv"));
  CHECK(s.backhaul_nodes == fs::path("/abs/bns.geojson"));
  CHECK(s.plan.radius == 750.0);
  CHECK(s.plan.kappa == 4);
  CHECK(s.plan.seed == 99);
  CHECK(s.plan.k0_override == 12u);
  CHECK(s.infection.alpha == 0.02);
  CHECK(s.infection.beta == 0.15);
  CHECK(s.infection.gamma == 4.4e5);
  CHECK(s.infection.delta == 0.01);
  CHECK(s.ntbn_counts == std::vector<std::size_t>{0, 2});
  CHECK(s.ntbn_strategy == PlacementStrategy::manual);
  CHECK(s.ntbn_sites == std::vector<std::pair<double, double>>{{1, 2}, {3, 4}});
  CHECK_FALSE(s.normalize);

  const auto d = parse_scenario("population = a.csv\nbackhaul_nodes = b.csv\nradius = 1\n", "/");
  CHECK(d.infection.alpha == 0.01);
  CHECK(d.plan.kappa == 10);
  CHECK(d.ntbn_counts == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("parse_scenario: configuration errors") {
  const std::string base = "population = a.csv\nbackhaul_nodes = b.csv\n";
  CHECK_THROWS_AS(parse_scenario(base, "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("radius = 1\nbackhaul_nodes = b.csv\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = -5\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = abc\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = 1\ncolour = red\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = 1\n[section]\nx = 1\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = 1\nalpha = 0\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = 1\nntbn_counts = 2, 1\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = 1\nntbn_strategy = manual\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = 1\nntbn_strategy = best\n", "/"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(base + "radius = 1\nkappa = -1\n", "/"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.ini"), ConfigError);
}

TEST_CASE("load_data: zero backhaul nodes and mixed coordinate modes") {
  const auto dir = fresh_dir("load");
  const auto scenario = load_scenario(two_villages(dir));
  const auto data = load_data(scenario);
  CHECK(data.users.size() == 50);
  CHECK(data.dropped_rows == 1);
  CHECK(data.terrestrial_bns.size() == 1);

  put(dir / "bns.csv", "x,y\n");
  CHECK_THROWS_AS(load_data(scenario), ConfigError);
  put(dir / "bns.csv", "lat,lon\n-1,37\n");
  CHECK_THROWS_AS(load_data(scenario), ConfigError);
}

TEST_CASE("step budget check") {
  InfectionParams p;
  p.max_steps = 100;
  const APSet aps{{{1000, 0, 1}}, 1};
  const std::vector<BackhaulNode> bns{{{0, 0, 1}, VertexKind::terrestrial_bn}};
  CHECK_THROWS_AS(check_step_budget(p, UnitFrame::identity(), aps, bns), ConfigError);
  p.max_steps = 1'000'000;
  CHECK_THROWS_AS(check_step_budget(p, UnitFrame::identity(), aps, bns), ConfigError);
  CHECK_NOTHROW(check_step_budget(p, UnitFrame::fit(std::vector<PlanarPoint>{{0, 0, 1}, {1000, 0, 1}}), aps, bns));
}

TEST_CASE("run_pipeline: two villages end to end") {
  const auto dir = fresh_dir("two");
  const auto scenario = load_scenario(two_villages(dir));
  const auto out = dir / "out";
  const auto result = run_pipeline(scenario, out);
  CHECK(result.plan.aps.k() == 2);
  for (const char* name : {"aps.geojson", "search_trace.json", "graph_m0.geojson", "graph_m0.dot",
                           "graph_m1.geojson", "graph_m2.dot", "dynamics.csv", "metrics.json",
                           "report.md"})
    CHECK_MESSAGE(fs::exists(out / name), name);
  REQUIRE(result.sweep.size() == 3);
  for (const auto& row : result.sweep) CHECK(row.infection.graph.edges.size() == 2);

  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  REQUIRE(metrics.size() == 3);
  CHECK(metrics[1]["m"] == 1);
  CHECK(metrics[1]["ntbn_positions"].size() == 1);
  for (const char* key : {"average_hop_count", "per_bn_ap_count", "fairness", "total_backhaul_length"})
    CHECK(metrics[0].contains(key));
  CHECK(slurp(out / "report.md").find("infection / optimal length ratio") != std::string::npos);
  CHECK(slurp(out / "dynamics.csv").rfind("step,vertex_id,radius,speed,infected_flag\n", 0) == 0);

  // Same scenario and seed: byte-identical bundle.
  const auto again = dir / "again";
  run_pipeline(scenario, again);
  for (const auto& entry : fs::directory_iterator(out))
    CHECK_MESSAGE(slurp(entry.path()) == slurp(again / entry.path().filename()),
                  entry.path().filename().string());
}

TEST_CASE("run_pipeline: stage failures keep earlier outputs") {
  const auto dir = fresh_dir("stage");
  auto scenario = load_scenario(two_villages(dir, "normalize = false\nmax_steps = 10\n"));
  // The budget check is a configuration error raised before the backhaul stage.
  CHECK_THROWS_AS(run_pipeline(scenario, dir / "out"), ConfigError);
  CHECK(fs::exists(dir / "out" / "aps.geojson"));
  CHECK_FALSE(fs::exists(dir / "out" / "metrics.json"));

  put(dir / "users.csv", "x,y,population\n1,2\n");
  try {
    run_pipeline(scenario, dir / "out2");
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "ingest");
  }
}

TEST_CASE("planner CLI: exit codes and subcommands") {
  const auto dir = fresh_dir("cli");
  const auto config = two_villages(dir).string();
  const std::string out = (dir / "out").string();
  CHECK(planner("pipeline --config " + config + " --seed 3 --out " + out) == 0);
  CHECK(fs::exists(dir / "out" / "report.md"));
  CHECK(planner("plan-aps --config " + config + " --out " + (dir / "plan").string()) == 0);
  CHECK(planner("gen-backhaul --config " + config + " --aps " + out + "/aps.geojson --out " +
                (dir / "gen").string()) == 0);
  CHECK(fs::exists(dir / "gen" / "graph_m0.geojson"));
  CHECK(fs::exists(dir / "gen" / "dynamics.csv"));
  CHECK(planner("add-ntbn --m 1 --config " + config + " --out " + (dir / "ntbn").string()) == 0);
  CHECK(fs::exists(dir / "ntbn" / "graph_m1.dot"));
  CHECK(planner("analyze --graph " + out + "/graph_m0.geojson --out " + (dir / "m.json").string()) == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "m.json"))["per_bn_ap_count"][0]["aps"] == 2);
  CHECK(planner("oracle --config " + config + " --out " + (dir / "oracle").string()) == 0);
  CHECK(fs::exists(dir / "oracle" / "oracle_forest.geojson"));
  CHECK(planner("simd") == 0);

  // Identical seeds give identical bundles through the CLI as well.
  CHECK(planner("pipeline --config " + config + " --seed 3 --out " + (dir / "out_b").string()) == 0);
  CHECK(slurp(dir / "out" / "metrics.json") == slurp(dir / "out_b" / "metrics.json"));

  CHECK(planner("") == 2);
  CHECK(planner("pipeline --out " + out) == 2);
  CHECK(planner("pipeline --config /nonexistent.ini --out " + out) == 2);
  put(dir / "bad.ini", "population = users.csv\nbackhaul_nodes = bns.csv\n");
  CHECK(planner("pipeline --config " + (dir / "bad.ini").string() + " --out " + out) == 2);
  put(dir / "nobn.csv", "x,y\n");
  put(dir / "nobn.ini", "population = users.csv\nbackhaul_nodes = nobn.csv\nradius = 200\n");
  CHECK(planner("pipeline --config " + (dir / "nobn.ini").string() + " --out " + out) == 2);
  CHECK(planner("add-ntbn --m 5 --config " + config + " --out " + (dir / "toomany").string()) == 3);
  put(dir / "broken.csv", "x,y,population\n1,2,3\nnot,a,row\n");
  put(dir / "broken.ini", "population = broken.csv\nbackhaul_nodes = bns.csv\nradius = 200\n");
  CHECK(planner("pipeline --config " + (dir / "broken.ini").string() + " --out " + out) == 3);
}

TEST_CASE("bundled sample scenario parses") {
  const auto s = load_scenario(fs::path(RNPLAN_DATA_DIR) / "scenario.ini");
  CHECK(fs::exists(s.population));
  CHECK(load_data(s).terrestrial_bns.size() == 1);
}
