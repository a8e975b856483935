#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rnplan/analytics.hpp"
#include "rnplan/errors.hpp"
#include "support/instances.hpp"

using namespace rnplan;
using rnplan::testing::uniform;

namespace {

// Vertices: `bns` backhaul nodes then `aps` APs on a line; edges by id pairs.
BackhaulGraph make_graph(std::size_t bns, std::size_t aps,
                         std::initializer_list<std::pair<std::size_t, std::size_t>> edges) {
  BackhaulGraph g;
  for (std::size_t b = 0; b < bns; ++b)
    g.vertices.push_back({{static_cast<double>(b) * 100.0, 0, 1}, VertexKind::terrestrial_bn});
  for (std::size_t a = 0; a < aps; ++a)
    g.vertices.push_back({{static_cast<double>(a), 10, 1}, VertexKind::access_point});
  for (auto [u, v] : edges) {
    const double len = distance(g.vertices[u].position, g.vertices[v].position);
    g.edges.push_back({u, v, len, len});
  }
  return g;
}

}  // namespace

TEST_CASE("hop_counts: star, chain, two trees") {
  const auto star = hop_counts(make_graph(1, 3, {{0, 1}, {0, 2}, {0, 3}}));
  CHECK(star.per_ap == std::vector<std::size_t>{1, 1, 1});
  CHECK(star.average == 1.0);

  const auto chain = hop_counts(make_graph(1, 2, {{0, 1}, {1, 2}}));
  CHECK(chain.per_ap == std::vector<std::size_t>{1, 2});
  CHECK(chain.average == 1.5);
  CHECK(chain.max == 2);

  // BN0 - AP2 - AP3 - AP4 and BN1 - AP5, BN1 - AP6.
  const auto two = hop_counts(make_graph(2, 5, {{0, 2}, {2, 3}, {3, 4}, {1, 5}, {1, 6}}));
  CHECK(two.average == doctest::Approx(1.6));
  CHECK(two.root == std::vector<std::size_t>{0, 0, 0, 1, 1});
}

TEST_CASE("hop_counts: corrupt graphs") {
  CHECK_THROWS_AS(hop_counts(make_graph(1, 2, {{0, 1}})), CorruptGraph);
  auto g = make_graph(1, 1, {{0, 1}});
  g.edges[0].to = 9;
  CHECK_THROWS_AS(hop_counts(g), CorruptGraph);
}

TEST_CASE("bn_loads: attribution") {
  auto loads = bn_loads(make_graph(2, 5, {{0, 2}, {2, 3}, {3, 4}, {0, 5}, {5, 6}}));
  CHECK(loads == std::vector<std::pair<std::size_t, std::size_t>>{{0, 5}, {1, 0}});
  loads = bn_loads(make_graph(2, 6, {{0, 2}, {0, 3}, {0, 4}, {1, 5}, {1, 6}, {6, 7}}));
  CHECK(loads == std::vector<std::pair<std::size_t, std::size_t>>{{0, 3}, {1, 3}});

  // An added non-terrestrial node takes over two of the five APs.
  auto g = make_graph(1, 5, {{0, 1}, {1, 2}, {2, 3}});
  g.vertices.insert(g.vertices.begin() + 1, Vertex{{50, 50, 1}, VertexKind::non_terrestrial_bn});
  for (auto& e : g.edges) {
    e.from += e.from >= 1;
    e.to += e.to >= 1;
  }
  g.edges.push_back({1, 5, 1, 1});
  g.edges.push_back({1, 6, 1, 1});
  loads = bn_loads(g);
  CHECK(loads == std::vector<std::pair<std::size_t, std::size_t>>{{0, 3}, {1, 2}});
}

TEST_CASE("jain_fairness: substitution") {
  const std::size_t equal[] = {3, 3};
  const std::size_t skewed[] = {5, 0};
  const std::size_t three[] = {4, 2, 2};
  const std::size_t idle[] = {0, 0, 0};
  CHECK(jain_fairness(equal) == 1.0);
  CHECK(jain_fairness(skewed) == 0.5);
  CHECK(jain_fairness(three) == doctest::Approx(64.0 / 72.0).epsilon(1e-15));
  CHECK(jain_fairness(idle) == 1.0);
  CHECK_THROWS_AS(jain_fairness({}), InvalidParameter);
}

TEST_CASE("jain_fairness: bounds") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::size_t> loads(1 + trial % 12);
    for (auto& x : loads) x = rnplan::testing::uniform_int(rng, 0, 9);
    if (std::all_of(loads.begin(), loads.end(), [](std::size_t x) { return x == 0; })) loads[0] = 1;
    const double j = jain_fairness(loads);
    CHECK(j >= 1.0 / static_cast<double>(loads.size()) - 1e-15);
    CHECK(j <= 1.0 + 1e-15);
    const bool equal = std::all_of(loads.begin(), loads.end(), [&](std::size_t x) { return x == loads[0]; });
    if (equal) CHECK(j == 1.0);
    else CHECK(j < 1.0);
  }
}

TEST_CASE("total_backhaul_length: sums and invariance") {
  CHECK(total_backhaul_length(make_graph(1, 0, {})) == 0.0);
  BackhaulGraph g = make_graph(1, 2, {});
  g.edges = {{0, 1, 3.0, 0}, {1, 2, 4.0, 0}};
  CHECK(total_backhaul_length(g) == 7.0);

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto aps = rnplan::testing::uniform_points(rng, 15, 1.0);
    const std::vector<BackhaulNode> bns{{{0.5, 0.5, 1}, VertexKind::terrestrial_bn}};
    auto graph = run_infection(aps, bns, InfectionParams{}).graph;
    const double base = total_backhaul_length(graph);
    CHECK(base == doctest::Approx(analyze(graph).total_backhaul_length));

    // Rotate the layout and recompute every edge from the moved vertices.
    const double t = uniform(rng, 0, 6.283);
    for (auto& v : graph.vertices)
      v.position = {v.position.x * std::cos(t) - v.position.y * std::sin(t),
                    v.position.x * std::sin(t) + v.position.y * std::cos(t), 1};
    for (auto& e : graph.edges) e.length = distance(graph.vertices[e.from].position, graph.vertices[e.to].position);
    std::shuffle(graph.edges.begin(), graph.edges.end(), rng);
    CHECK(total_backhaul_length(graph) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("analyze: conservation and hop floor on random forests") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto aps = rnplan::testing::uniform_points(rng, 1 + trial, 1.0);
    std::vector<BackhaulNode> bns;
    for (int b = 0; b < 1 + trial % 4; ++b)
      bns.push_back({{uniform(rng, 0, 1), uniform(rng, 0, 1), 1}, VertexKind::terrestrial_bn});
    const auto m = analyze(run_infection(aps, bns, InfectionParams{}).graph);
    std::size_t sum = 0;
    for (const auto& [bn, c] : m.per_bn_ap_count) sum += c;
    CHECK(sum == aps.size());
    CHECK(m.per_bn_ap_count.size() == bns.size());
    CHECK(m.average_hop_count >= 1.0);
    CHECK(m.fairness > 0.0);
    CHECK(m.fairness <= 1.0);
    CHECK(m.mean_bn_load == doctest::Approx(static_cast<double>(aps.size()) / static_cast<double>(bns.size())));
  }
}
