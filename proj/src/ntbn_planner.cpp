#include "rnplan/ntbn_planner.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "rnplan/errors.hpp"

namespace rnplan {

const char* to_string(PlacementStrategy strategy) noexcept {
  switch (strategy) {
    case PlacementStrategy::weighted_farthest_kmeans: return "weighted-farthest-kmeans";
    case PlacementStrategy::manual: return "manual";
  }
  return "unknown";
}

NtbnPlan place_ntbns(const APSet& aps, std::span<const BackhaulNode> terrestrial_bns,
                     std::size_t m, std::uint64_t seed) {
  NtbnPlan plan;
  if (m == 0) return plan;
  if (m > aps.k())
    throw InvalidParameter("place_ntbns: " + std::to_string(m) + " NTBNs requested for " +
                           std::to_string(aps.k()) + " APs");
  if (terrestrial_bns.empty())
    throw InvalidParameter("place_ntbns: at least one terrestrial backhaul node is required");

  std::vector<PlanarPoint> weighted;
  weighted.reserve(aps.k());
  for (const auto& ap : aps.centers) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& bn : terrestrial_bns) nearest = std::min(nearest, distance(ap, bn.position));
    weighted.push_back({ap.x, ap.y, nearest});
  }
  if (distinct_positions(weighted) < m)
    throw InvalidParameter("place_ntbns: fewer remote AP positions than requested NTBNs");

  const KMeansResult clusters = weighted_kmeans(weighted, m, seed);
  for (const auto& c : clusters.centers) plan.positions.push_back({c.x, c.y, 1.0});
  return plan;
}

NtbnPlan manual_plan(std::vector<PlanarPoint> positions) {
  return {std::move(positions), PlacementStrategy::manual};
}

InfectionResult augmented_infection(const APSet& aps, std::span<const BackhaulNode> terrestrial_bns,
                                    const NtbnPlan& plan, const InfectionParams& params,
                                    const InfectionOptions& options) {
  std::vector<BackhaulNode> bns(terrestrial_bns.begin(), terrestrial_bns.end());
  for (const auto& p : plan.positions) bns.push_back({p, VertexKind::non_terrestrial_bn});
  return run_infection(aps.centers, bns, params, options);
}

std::vector<SweepRow> ntbn_sweep(const APSet& aps, std::span<const BackhaulNode> terrestrial_bns,
                                 std::span<const std::size_t> m_values,
                                 const InfectionParams& params, std::uint64_t seed,
                                 const InfectionOptions& options, const NtbnPlan* manual) {
  if (!std::is_sorted(m_values.begin(), m_values.end()))
    throw InvalidParameter("ntbn_sweep: m values must be non-decreasing");
  std::vector<SweepRow> rows;
  rows.reserve(m_values.size());
  for (std::size_t m : m_values) {
    SweepRow row;
    row.m = m;
    if (manual) {
      if (m > manual->count())
        throw InvalidParameter("ntbn_sweep: manual plan has only " +
                               std::to_string(manual->count()) + " positions");
      row.plan = manual_plan({manual->positions.begin(),
                              manual->positions.begin() + static_cast<std::ptrdiff_t>(m)});
    } else {
      row.plan = place_ntbns(aps, terrestrial_bns, m, seed);
    }
    row.infection = augmented_infection(aps, terrestrial_bns, row.plan, params, options);
    row.metrics = analyze(row.infection.graph);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rnplan
