#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rnplan/infection.hpp"

namespace rnplan {

struct HopCounts {
  std::vector<std::size_t> per_ap;  // aligned with AP vertices in graph order
  std::vector<std::size_t> root;    // BN vertex id rooting each AP's tree
  double average = 0.0;
  std::size_t max = 0;
};

struct NetworkMetrics {
  double average_hop_count = 0.0;
  std::size_t max_hop_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> per_bn_ap_count;  // (BN vertex id, APs)
  double mean_bn_load = 0.0;
  std::size_t max_bn_load = 0;
  double fairness = 1.0;
  double total_backhaul_length = 0.0;  // meters
};

/// Breadth-first search from every backhaul node over the undirected edges.
/// Throws CorruptGraph if some AP is unreachable.
HopCounts hop_counts(const BackhaulGraph& graph);

/// AP count attributed to each backhaul node, in vertex order; idle BNs map to 0.
std::vector<std::pair<std::size_t, std::size_t>> bn_loads(const BackhaulGraph& graph);

/// Jain's index (sum x)^2 / (n sum x^2); 1 for all-zero loads.
double jain_fairness(std::span<const std::size_t> loads);

double total_backhaul_length(const BackhaulGraph& graph) noexcept;

NetworkMetrics analyze(const BackhaulGraph& graph);

}  // namespace rnplan
