#include "rnplan/ap_planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rnplan/errors.hpp"

namespace rnplan {

void PlanConfig::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidParameter("plan config: radius must be positive");
  if (k0_override && *k0_override == 0)
    throw InvalidParameter("plan config: k0 override must be positive");
  if (raster_resolution && !(*raster_resolution > 0.0))
    throw InvalidParameter("plan config: raster resolution must be positive");
}

std::size_t initial_k0(std::span<const PlanarPoint> users, double radius,
                       std::optional<double> resolution) {
  if (users.empty()) throw InvalidParameter("initial_k0: no users");
  if (!(radius > 0.0)) throw InvalidParameter("initial_k0: radius must be positive");
  const double half = radius / 2.0;
  const double area = inflated_area(users, half, resolution.value_or(default_raster_resolution(half)));
  const double estimate = std::ceil(4.0 * area / (std::numbers::pi * radius * radius));
  const std::size_t upper = std::max<std::size_t>(1, distinct_positions(users));
  if (!(estimate >= 1.0)) return 1;
  if (estimate >= static_cast<double>(upper)) return upper;
  return static_cast<std::size_t>(estimate);
}

std::size_t count_overlaps(const APSet& aps) {
  const double reach2 = 4.0 * aps.radius * aps.radius;
  std::size_t overlaps = 0;
  // Centre i is removed before checking, so it is compared with i+1.. only.
  for (std::size_t i = 0; i < aps.centers.size(); ++i) {
    for (std::size_t j = i + 1; j < aps.centers.size(); ++j) {
      if (squared_distance(aps.centers[i], aps.centers[j]) <= reach2) {
        ++overlaps;
        break;
      }
    }
  }
  return overlaps;
}

std::size_t prune_overlaps(const APSet& aps) {
  if (aps.centers.empty()) throw InvalidParameter("prune_overlaps: empty AP set");
  const std::size_t overlaps = count_overlaps(aps);
  const std::size_t k0 = aps.k();
  return k0 + 1 > overlaps ? std::max<std::size_t>(1, k0 + 1 - overlaps) : 1;
}

double rho_of_k(std::span<const PlanarPoint> users, double radius, std::size_t k,
                std::uint64_t seed) {
  const KMeansResult clusters = weighted_kmeans(users, k, derive_seed(seed, k));
  return connectivity_ratio(APSet{clusters.centers, radius}, users);
}

SearchTrace search_k_star(std::span<const PlanarPoint> users, double radius, std::size_t k_hat,
                          std::size_t kappa, std::uint64_t seed) {
  if (k_hat == 0) throw InvalidParameter("search_k_star: k_hat must be at least 1");
  const std::size_t distinct = distinct_positions(users);
  if (distinct == 0) throw InvalidParameter("search_k_star: no user with positive weight");

  const std::size_t lo = std::min(k_hat > kappa ? k_hat - kappa : 1, distinct);
  const std::size_t hi = std::max(lo, std::min(k_hat + kappa, distinct));

  SearchTrace trace;
  trace.k_hat = k_hat;
  for (std::size_t k = std::max<std::size_t>(lo, 1); k <= hi; ++k) {
    const double rho = rho_of_k(users, radius, k, seed);
    trace.evaluated.emplace_back(k, rho);
    if (trace.k_star == 0 || rho > trace.rho_star) {
      trace.k_star = k;
      trace.rho_star = rho;
    }
  }
  return trace;
}

APPlan plan_aps(std::span<const PlanarPoint> users, const PlanConfig& config) {
  config.validate();
  if (users.empty()) throw InvalidParameter("plan_aps: no users");

  const std::size_t k0 =
      config.k0_override ? *config.k0_override
                         : initial_k0(users, config.radius, config.raster_resolution);
  const KMeansResult initial = weighted_kmeans(users, k0, derive_seed(config.seed, k0));
  const std::size_t k_hat = prune_overlaps(APSet{initial.centers, config.radius});

  APPlan plan;
  plan.trace = search_k_star(users, config.radius, k_hat, config.kappa, config.seed);
  plan.trace.k0 = k0;
  plan.clustering = weighted_kmeans(users, plan.trace.k_star, derive_seed(config.seed, plan.trace.k_star));
  plan.aps = APSet{plan.clustering.centers, config.radius};
  return plan;
}

}  // namespace rnplan
