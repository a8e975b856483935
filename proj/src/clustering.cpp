#include "rnplan/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rnplan/errors.hpp"
#include "rnplan/kernels.hpp"

namespace rnplan {
namespace {

// mt19937_64 output is fully specified by the standard; the distributions in
// <random> are not, so draws are formed from the raw bits.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index i with prefix(scores, i) <= target < prefix(scores, i + 1), skipping
// zero scores.
std::size_t sample_index(std::span<const double> scores, double total, std::mt19937_64& rng) {
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = scores.size();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] > 0.0)) continue;
    acc += scores[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;  // rounding left target at the upper end
}

std::vector<PlanarPoint> seed_plus_plus(std::span<const PlanarPoint> users,
                                        const kernels::Columns& cols, std::size_t k,
                                        std::mt19937_64& rng) {
  const std::size_t n = users.size();
  std::vector<double> weights(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::max(users[i].weight, 0.0);
    total += weights[i];
  }

  std::vector<PlanarPoint> centers;
  centers.reserve(k);
  const std::size_t first = sample_index(weights, total, rng);
  centers.push_back({users[first].x, users[first].y, 0.0});

  std::vector<double> nearest(n), d2(n), scores(n);
  kernels::squared_distances(cols, users[first].x, users[first].y, nearest);
  while (centers.size() < k) {
    double score_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = weights[i] * nearest[i];
      score_total += scores[i];
    }
    if (!(score_total > 0.0))
      throw Error("weighted_kmeans: seeding ran out of distinct positions");
    const std::size_t pick = sample_index(scores, score_total, rng);
    centers.push_back({users[pick].x, users[pick].y, 0.0});
    kernels::squared_distances(cols, users[pick].x, users[pick].y, d2);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], d2[i]);
  }
  return centers;
}

}  // namespace

KMeansResult weighted_kmeans(std::span<const PlanarPoint> users, std::size_t k,
                             std::uint64_t seed) {
  if (k == 0) throw InvalidParameter("weighted_kmeans: k must be at least 1");
  for (const auto& u : users)
    if (!std::isfinite(u.x) || !std::isfinite(u.y) || !(u.weight >= 0.0))
      throw InvalidParameter("weighted_kmeans: users must be finite with nonnegative weight");
  const std::size_t distinct = distinct_positions(users);
  if (distinct == 0) throw InvalidParameter("weighted_kmeans: no user with positive weight");

  KMeansResult result;
  result.requested_k = k;
  if (k > distinct) {
    k = distinct;
    result.k_reduced = true;
  }

  const std::size_t n = users.size();
  const kernels::Columns cols(users);
  std::mt19937_64 rng(seed);
  std::vector<PlanarPoint> centers = seed_plus_plus(users, cols, k, rng);

  std::vector<std::uint32_t> assignment(n), next(n);
  std::vector<double> best_d2(n);
  kernels::Columns center_cols(centers);
  kernels::nearest_center(cols, center_cols, assignment, best_d2);

  std::vector<double> sx(k), sy(k), sw(k);
  std::vector<std::uint8_t> taken(n);
  std::size_t iterations = 0;
  while (iterations < kMaxLloydIterations) {
    std::fill(sx.begin(), sx.end(), 0.0);
    std::fill(sy.begin(), sy.end(), 0.0);
    std::fill(sw.begin(), sw.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = users[i].weight;
      sx[assignment[i]] += w * users[i].x;
      sy[assignment[i]] += w * users[i].y;
      sw[assignment[i]] += w;
    }
    std::fill(taken.begin(), taken.end(), 0);
    for (std::size_t c = 0; c < k; ++c) {
      if (sw[c] > 0.0) {
        centers[c].x = sx[c] / sw[c];
        centers[c].y = sy[c] / sw[c];
        continue;
      }
      // Empty cluster: move it onto the positive-weight user farthest from its centre.
      std::size_t far = n;
      double far_d2 = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(users[i].weight > 0.0) || taken[i]) continue;
        if (best_d2[i] > far_d2) {
          far_d2 = best_d2[i];
          far = i;
        }
      }
      if (far == n) continue;
      taken[far] = 1;
      centers[c].x = users[far].x;
      centers[c].y = users[far].y;
    }

    center_cols = kernels::Columns(centers);
    kernels::nearest_center(cols, center_cols, next, best_d2);
    ++iterations;
    const bool changed = next != assignment;
    assignment.swap(next);
    if (!changed) break;
  }

  for (auto& c : centers) c.weight = 0.0;
  for (std::size_t i = 0; i < n; ++i) centers[assignment[i]].weight += users[i].weight;

  result.centers = std::move(centers);
  result.assignment = std::move(assignment);
  result.iterations = iterations;
  return result;
}

CoverageReport covered_users(const APSet& aps, std::span<const PlanarPoint> users) {
  CoverageReport report;
  for (const auto& u : users) report.total_weight += u.weight;
  if (users.empty() || aps.centers.empty()) return report;

  const kernels::Columns cols(users);
  const kernels::Columns centers(aps.centers);
  std::vector<std::uint8_t> covered(users.size());
  kernels::within_any(cols, centers, aps.radius * aps.radius, covered);
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!covered[i]) continue;
    report.covered_indices.push_back(i);
    report.covered_weight += users[i].weight;
  }
  report.rho = report.total_weight > 0.0
                   ? connectivity_ratio(report.covered_weight, aps.k(), report.total_weight)
                   : 0.0;
  return report;
}

double connectivity_ratio(double covered_weight, std::size_t k, double total_weight) {
  if (k == 0) throw InvalidParameter("connectivity_ratio: AP set is empty");
  if (!(total_weight > 0.0)) throw UndefinedRatio("connectivity_ratio: total user weight is zero");
  return covered_weight * covered_weight / (static_cast<double>(k) * total_weight);
}

double connectivity_ratio(const APSet& aps, std::span<const PlanarPoint> users) {
  if (aps.centers.empty()) throw InvalidParameter("connectivity_ratio: AP set is empty");
  const CoverageReport report = covered_users(aps, users);
  return connectivity_ratio(report.covered_weight, aps.k(), report.total_weight);
}

}  // namespace rnplan
