#include <filesystem>
#include <random>

#include "doctest.h"
#include "rnplan/errors.hpp"
#include "rnplan/io.hpp"
#include "support/instances.hpp"

using namespace rnplan;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "rnplan_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("population CSV: valid rows, dropped rows, planar mode") {
  const auto t = io::parse_population_csv("lat,lon,population\n-1.1,37.2,5\n-1.2,37.3,1\n-1.0,37.1,2.5\n");
  CHECK(t.mode == io::CoordinateMode::geographic);
  REQUIRE(t.size() == 3);
  CHECK(t.geo[2].weight == 2.5);
  CHECK(t.geo[0].lat == -1.1);

  const auto d = io::parse_population_csv("lon, lat, population\r\n37.2,-1.1,0\n37.3,-1.2,4\n\n");
  CHECK(d.size() == 1);
  CHECK(d.dropped == 1);
  CHECK(d.geo[0].lon == 37.3);

  const auto p = io::parse_population_csv("x,y,population\n10,20,1\n");
  CHECK(p.mode == io::CoordinateMode::planar);
  CHECK(p.planar[0] == PlanarPoint{10, 20, 1});
}

TEST_CASE("population CSV: errors carry line numbers") {
  CHECK_THROWS_AS(io::parse_population_csv(""), ParseError);
  CHECK_THROWS_AS(io::parse_population_csv("a,b,population\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(io::parse_population_csv("lat,lon\n1,2\n"), ParseError);
  CHECK_THROWS_AS(io::parse_population_csv("lat,lon,population\n1,2,0\n"), ParseError);
  CHECK_THROWS_AS(io::parse_population_csv("lat,lon,population\n95,2,1\n"), ParseError);
  try {
    io::parse_population_csv("lat,lon,population\n1,2,3\n1,x,3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    io::parse_population_csv("lat,lon,population\n1,2,3\n\n1,2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("population GeoJSON: points, non-point features, missing population") {
  const std::string ok = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","geometry":{"type":"Point","coordinates":[37.2,-1.1]},"properties":{"population":3}},
    {"type":"Feature","geometry":{"type":"Point","coordinates":[37.3,-1.2]},"properties":{"population":0}}]})";
  const auto t = io::parse_population_geojson(ok);
  REQUIRE(t.size() == 1);
  CHECK(t.dropped == 1);
  CHECK(t.geo[0].lat == -1.1);
  CHECK(t.geo[0].lon == 37.2);

  const std::string line = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","geometry":{"type":"Point","coordinates":[37.2,-1.1]},"properties":{"population":3}},
    {"type":"Feature","geometry":{"type":"LineString","coordinates":[[0,0],[1,1]]},"properties":{}}]})";
  try {
    io::parse_population_geojson(line);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("feature 1") != std::string::npos);
  }
  const std::string bare = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","geometry":{"type":"Point","coordinates":[37.2,-1.1]},"properties":{}}]})";
  CHECK_THROWS_AS(io::parse_population_geojson(bare), ParseError);
  CHECK_THROWS_AS(io::parse_population_geojson("{not json"), ParseError);
  CHECK_THROWS_AS(io::parse_population_geojson(R"({"type":"Feature"})"), ParseError);
}

TEST_CASE("site files: population optional, empty allowed") {
  const auto path = scratch("sites.csv");
  io::write_file_atomic(path, "lat,lon\n-1.0,37.0\n");
  const auto t = io::ingest_sites(path, io::PointFormat::csv);
  REQUIRE(t.size() == 1);
  CHECK(t.geo[0].weight == 1.0);
  io::write_file_atomic(path, "lat,lon\n");
  CHECK(io::ingest_sites(path, io::PointFormat::csv).size() == 0);
  CHECK_THROWS_AS(io::ingest_population(scratch("missing.csv"), io::PointFormat::csv), ParseError);
}

TEST_CASE("format_from_path") {
  CHECK(io::format_from_path("a/b.CSV") == io::PointFormat::csv);
  CHECK(io::format_from_path("a.geojson") == io::PointFormat::geojson);
  CHECK(io::format_from_path("a.json") == io::PointFormat::geojson);
  CHECK_THROWS_AS(io::format_from_path("a.txt"), ParseError);
}

TEST_CASE("points GeoJSON round-trips through ingest") {
  std::mt19937_64 rng(3);
  io::CoordinateSystem cs;
  cs.mode = io::CoordinateMode::geographic;
  cs.reference = {-1.08, 37.17, 1.0};
  std::vector<GeoPoint> original;
  for (int i = 0; i < 50; ++i)
    original.push_back({rnplan::testing::uniform(rng, -1.2, -0.9), rnplan::testing::uniform(rng, 37.0, 37.4),
                        static_cast<double>(1 + i)});
  const auto planar = project_to_plane(original, cs.reference);
  const auto back = io::parse_population_geojson(io::points_geojson(planar, cs));
  REQUIRE(back.size() == original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(std::abs(back.geo[i].lat - original[i].lat) <= 1e-9);
    CHECK(std::abs(back.geo[i].lon - original[i].lon) <= 1e-9);
    CHECK(back.geo[i].weight == original[i].weight);
  }

  io::CoordinateSystem flat;
  const std::vector<PlanarPoint> pts{{1.5, -2.25, 3}, {1e6, 0.1, 1}};
  const auto again = io::parse_population_geojson(io::points_geojson(pts, flat));
  CHECK(again.mode == io::CoordinateMode::planar);
  CHECK(again.planar == pts);
}

TEST_CASE("graph GeoJSON round-trips") {
  std::mt19937_64 rng(9);
  const auto aps = rnplan::testing::uniform_points(rng, 12, 5000.0);
  const std::vector<BackhaulNode> bns{{{0, 0, 1}, VertexKind::terrestrial_bn},
                                      {{4000, 4000, 1}, VertexKind::non_terrestrial_bn}};
  InfectionOptions options;
  options.frame = UnitFrame::fit(aps);
  const auto graph = run_infection(aps, bns, InfectionParams{}, options).graph;

  for (auto mode : {io::CoordinateMode::planar, io::CoordinateMode::geographic}) {
    io::CoordinateSystem cs;
    cs.mode = mode;
    cs.reference = {-1.0, 37.0, 1.0};
    io::CoordinateSystem seen;
    const auto back = io::parse_graph_geojson(io::graph_geojson(graph, cs), &seen);
    CHECK(seen.mode == mode);
    REQUIRE(back.vertices.size() == graph.vertices.size());
    REQUIRE(back.edges.size() == graph.edges.size());
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
      CHECK(back.vertices[v].kind == graph.vertices[v].kind);
      CHECK(back.vertices[v].position.x == doctest::Approx(graph.vertices[v].position.x).epsilon(1e-9));
      CHECK(back.vertices[v].position.y == doctest::Approx(graph.vertices[v].position.y).epsilon(1e-9));
    }
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      CHECK(back.edges[e].from == graph.edges[e].from);
      CHECK(back.edges[e].to == graph.edges[e].to);
      CHECK(back.edges[e].length == graph.edges[e].length);
    }
  }
  CHECK_THROWS_AS(io::parse_graph_geojson("[]"), ParseError);
}

TEST_CASE("DOT, dynamics CSV and JSON writers") {
  BackhaulGraph g;
  g.vertices = {{{0, 0, 1}, VertexKind::terrestrial_bn}, {{3, 4, 1}, VertexKind::access_point}};
  g.edges = {{0, 1, 5.0, 0.5}};
  const std::string dot = io::graph_dot(g);
  CHECK(dot.rfind("graph backhaul {", 0) == 0);
  CHECK(dot.find("v0 -- v1 [length_m=5]") != std::string::npos);

  const DynamicsSample trace[] = {{0, 0, 0.0, 0.16, true}, {1, 1, 0.5, 0.25, false}};
  CHECK(io::dynamics_csv(trace, 2.0) ==
        "step,vertex_id,radius,speed,infected_flag\n0,0,0,0.32,1\n1,1,1,0.5,0\n");

  SearchTrace t;
  t.k0 = 5;
  t.k_hat = 4;
  t.evaluated = {{3, 1.5}, {4, 2.0}};
  t.k_star = 4;
  t.rho_star = 2.0;
  const std::string json = io::search_trace_json(t);
  CHECK(json.find("\"k_star\": 4") != std::string::npos);
  CHECK(json.find("\"rho\": 1.5") != std::string::npos);

  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1e-300) == "1e-300");
}

TEST_CASE("write_file_atomic replaces content and leaves no temporary") {
  const auto path = scratch("atomic.txt");
  io::write_file_atomic(path, "first");
  io::write_file_atomic(path, "second");
  CHECK(io::read_file(path) == "second");
  fs::path tmp = path;
  tmp += ".tmp";
  CHECK_FALSE(fs::exists(tmp));
}
