#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rnplan/analytics.hpp"
#include "rnplan/clustering.hpp"
#include "rnplan/infection.hpp"

namespace rnplan {

enum class PlacementStrategy { weighted_farthest_kmeans, manual };

const char* to_string(PlacementStrategy strategy) noexcept;

struct NtbnPlan {
  std::vector<PlanarPoint> positions;
  PlacementStrategy strategy = PlacementStrategy::weighted_farthest_kmeans;

  std::size_t count() const noexcept { return positions.size(); }
};

/// Places m non-terrestrial backhaul nodes at the centroids of a k-means over
/// the AP positions, each AP weighted by its distance to the nearest
/// terrestrial BN. Throws InvalidParameter if m exceeds the AP count or the
/// remote APs do not offer m distinct positions.
NtbnPlan place_ntbns(const APSet& aps, std::span<const BackhaulNode> terrestrial_bns,
                     std::size_t m, std::uint64_t seed);

NtbnPlan manual_plan(std::vector<PlanarPoint> positions);

/// Infection with terrestrial and planned non-terrestrial BNs all infected at
/// step 0. Terrestrial BNs keep the lower vertex ids.
InfectionResult augmented_infection(const APSet& aps, std::span<const BackhaulNode> terrestrial_bns,
                                    const NtbnPlan& plan, const InfectionParams& params,
                                    const InfectionOptions& options = {});

struct SweepRow {
  std::size_t m = 0;
  NtbnPlan plan;
  InfectionResult infection;
  NetworkMetrics metrics;
};

/// One row per entry of `m_values` (which must be non-decreasing). A manual
/// plan, when given, supplies its first m positions for each row.
std::vector<SweepRow> ntbn_sweep(const APSet& aps, std::span<const BackhaulNode> terrestrial_bns,
                                 std::span<const std::size_t> m_values,
                                 const InfectionParams& params, std::uint64_t seed,
                                 const InfectionOptions& options = {},
                                 const NtbnPlan* manual = nullptr);

}  // namespace rnplan
