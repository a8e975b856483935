#include "rnplan/analytics.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

#include "rnplan/errors.hpp"

namespace rnplan {
namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

struct Bfs {
  std::vector<std::size_t> depth;
  std::vector<std::size_t> root;
};

Bfs search(const BackhaulGraph& graph) {
  const std::size_t n = graph.vertices.size();
  std::vector<std::vector<std::size_t>> adjacent(n);
  for (const Edge& e : graph.edges) {
    if (e.from >= n || e.to >= n) throw CorruptGraph("edge references a missing vertex");
    adjacent[e.from].push_back(e.to);
    adjacent[e.to].push_back(e.from);
  }
  Bfs bfs{std::vector<std::size_t>(n, kUnreached), std::vector<std::size_t>(n, kUnreached)};
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (!graph.vertices[v].is_bn()) continue;
    bfs.depth[v] = 0;
    bfs.root[v] = v;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adjacent[v]) {
      if (bfs.depth[w] != kUnreached) continue;
      bfs.depth[w] = bfs.depth[v] + 1;
      bfs.root[w] = bfs.root[v];
      queue.push_back(w);
    }
  }
  return bfs;
}

}  // namespace

HopCounts hop_counts(const BackhaulGraph& graph) {
  const Bfs bfs = search(graph);
  HopCounts hops;
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    if (graph.vertices[v].is_bn()) continue;
    if (bfs.depth[v] == kUnreached)
      throw CorruptGraph("AP vertex " + std::to_string(v) + " has no path to a backhaul node");
    hops.per_ap.push_back(bfs.depth[v]);
    hops.root.push_back(bfs.root[v]);
  }
  if (!hops.per_ap.empty()) {
    std::size_t sum = 0;
    for (std::size_t h : hops.per_ap) sum += h;
    hops.average = static_cast<double>(sum) / static_cast<double>(hops.per_ap.size());
    hops.max = *std::max_element(hops.per_ap.begin(), hops.per_ap.end());
  }
  return hops;
}

std::vector<std::pair<std::size_t, std::size_t>> bn_loads(const BackhaulGraph& graph) {
  const Bfs bfs = search(graph);
  std::vector<std::size_t> count(graph.vertices.size(), 0);
  for (std::size_t v = 0; v < graph.vertices.size(); ++v)
    if (!graph.vertices[v].is_bn() && bfs.root[v] != kUnreached) ++count[bfs.root[v]];
  std::vector<std::pair<std::size_t, std::size_t>> loads;
  for (std::size_t v = 0; v < graph.vertices.size(); ++v)
    if (graph.vertices[v].is_bn()) loads.emplace_back(v, count[v]);
  return loads;
}

double jain_fairness(std::span<const std::size_t> loads) {
  if (loads.empty()) throw InvalidParameter("jain_fairness: empty load list");
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t x : loads) {
    const double v = static_cast<double>(x);
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq == 0.0) return 1.0;
  return sum * sum / (static_cast<double>(loads.size()) * sum_sq);
}

double total_backhaul_length(const BackhaulGraph& graph) noexcept {
  double total = 0.0;
  for (const Edge& e : graph.edges) total += e.length;
  return total;
}

NetworkMetrics analyze(const BackhaulGraph& graph) {
  NetworkMetrics m;
  const HopCounts hops = hop_counts(graph);
  m.average_hop_count = hops.average;
  m.max_hop_count = hops.max;
  m.per_bn_ap_count = bn_loads(graph);
  std::vector<std::size_t> loads;
  for (const auto& [bn, count] : m.per_bn_ap_count) loads.push_back(count);
  if (!loads.empty()) {
    std::size_t sum = 0;
    for (std::size_t x : loads) sum += x;
    m.mean_bn_load = static_cast<double>(sum) / static_cast<double>(loads.size());
    m.max_bn_load = *std::max_element(loads.begin(), loads.end());
    m.fairness = jain_fairness(loads);
  }
  m.total_backhaul_length = total_backhaul_length(graph);
  return m;
}

}  // namespace rnplan
