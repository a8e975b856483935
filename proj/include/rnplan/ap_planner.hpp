#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rnplan/clustering.hpp"
#include "rnplan/geometry.hpp"

namespace rnplan {

struct PlanConfig {
  double radius = 0.0;  // AP coverage radius R, meters
  std::size_t kappa = 10;
  std::uint64_t seed = 0;
  std::optional<std::size_t> k0_override;
  // Strip height for the inflated-area estimate; defaults to (R/2)/50.
  std::optional<double> raster_resolution;

  void validate() const;
};

struct SearchTrace {
  std::size_t k0 = 0;
  std::size_t k_hat = 0;
  std::vector<std::pair<std::size_t, double>> evaluated;  // ascending k
  std::size_t k_star = 0;
  double rho_star = 0.0;
};

struct APPlan {
  APSet aps;
  SearchTrace trace;
  KMeansResult clustering;  // the final clustering psi(k*)
};

/// Seed used for the clustering with k centres.
inline std::uint64_t derive_seed(std::uint64_t seed, std::size_t k) noexcept {
  return seed ^ static_cast<std::uint64_t>(k);
}

/// ceil(4 * inflated_area(users, R/2) / (pi R^2)), clamped to
/// [1, distinct positions].
std::size_t initial_k0(std::span<const PlanarPoint> users, double radius,
                       std::optional<double> resolution = std::nullopt);

/// Number of centres that still see another centre within 2R when the centres
/// are removed one by one in index order.
std::size_t count_overlaps(const APSet& aps);

/// k_hat = k0 - overlaps + 1 with k0 = |aps|, clamped below at 1.
std::size_t prune_overlaps(const APSet& aps);

/// Connectivity ratio of psi(k): weighted k-means with derive_seed(seed, k).
double rho_of_k(std::span<const PlanarPoint> users, double radius, std::size_t k,
                std::uint64_t seed);

/// Exhaustive search over [max(1, k_hat - kappa), min(k_hat + kappa, distinct)].
/// Ties go to the smaller k.
SearchTrace search_k_star(std::span<const PlanarPoint> users, double radius, std::size_t k_hat,
                          std::size_t kappa, std::uint64_t seed);

/// k0 -> psi(k0) -> k_hat -> window search -> psi(k*).
APPlan plan_aps(std::span<const PlanarPoint> users, const PlanConfig& config);

}  // namespace rnplan
