#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rnplan/geometry.hpp"

namespace rnplan {

/// Access points placed at cluster centroids, each covering a closed disk of
/// radius `radius` meters.
struct APSet {
  std::vector<PlanarPoint> centers;
  double radius = 0.0;

  std::size_t k() const noexcept { return centers.size(); }
};

struct CoverageReport {
  std::vector<std::size_t> covered_indices;
  double covered_weight = 0.0;
  double total_weight = 0.0;
  double rho = 0.0;
};

struct KMeansResult {
  std::vector<PlanarPoint> centers;  // weight = summed weight of the cluster
  std::vector<std::uint32_t> assignment;
  std::size_t iterations = 0;
  std::size_t requested_k = 0;
  bool k_reduced = false;  // requested k exceeded the number of distinct positions
};

inline constexpr std::size_t kMaxLloydIterations = 300;

/// Weighted Lloyd iterations from weighted k-means++ seeding.
///
/// Seeding draws the first centre with probability proportional to weight and
/// each further centre proportional to weight * D^2. Lloyd steps assign every
/// user to its nearest centre (lowest index on ties) and move each centre to
/// the weighted mean of its cluster. A cluster left without weight is
/// re-seeded at the positive-weight user farthest from its own centre.
/// Stops when no assignment changes or after kMaxLloydIterations.
///
/// Deterministic for identical (users, k, seed). If k exceeds the number of
/// distinct positive-weight positions it is reduced to that count and
/// `k_reduced` is set. Throws InvalidParameter for k == 0 or when no user has
/// positive weight.
KMeansResult weighted_kmeans(std::span<const PlanarPoint> users, std::size_t k,
                             std::uint64_t seed);

/// Users within distance R of at least one centre (boundary inclusive).
CoverageReport covered_users(const APSet& aps, std::span<const PlanarPoint> users);

/// covered_weight^2 / (k * total_weight). Throws UndefinedRatio when the total
/// user weight is zero and InvalidParameter for an empty AP set.
double connectivity_ratio(const APSet& aps, std::span<const PlanarPoint> users);

/// The same ratio from precomputed weights.
double connectivity_ratio(double covered_weight, std::size_t k, double total_weight);

}  // namespace rnplan
