#include "rnplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "rnplan/errors.hpp"
#include "rnplan/kernels.hpp"

namespace rnplan {

bool GeoPoint::valid() const noexcept {
  return std::isfinite(lat) && std::isfinite(lon) && std::isfinite(weight) && lat >= -90.0 &&
         lat <= 90.0 && lon >= -180.0 && lon <= 180.0 && weight >= 0.0;
}

double squared_distance(const PlanarPoint& a, const PlanarPoint& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(const PlanarPoint& a, const PlanarPoint& b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

GeoPoint geo_centroid(std::span<const GeoPoint> points) {
  GeoPoint c{0.0, 0.0, 0.0};
  if (points.empty()) return c;
  double w = 0.0;
  for (const auto& p : points) w += p.weight;
  const bool unweighted = !(w > 0.0);
  double lat = 0.0, lon = 0.0;
  for (const auto& p : points) {
    const double pw = unweighted ? 1.0 : p.weight;
    lat += pw * p.lat;
    lon += pw * p.lon;
  }
  const double norm = unweighted ? static_cast<double>(points.size()) : w;
  c.lat = lat / norm;
  c.lon = lon / norm;
  c.weight = w;
  return c;
}

std::vector<PlanarPoint> project_to_plane(std::span<const GeoPoint> points,
                                          const GeoPoint& reference) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  const double x_scale = std::cos(reference.lat * kDegToRad) * kMetersPerDegree;
  std::vector<PlanarPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (!p.valid()) throw InvalidParameter("project_to_plane: invalid geographic point");
    out.push_back({(p.lon - reference.lon) * x_scale, (p.lat - reference.lat) * kMetersPerDegree,
                   p.weight});
  }
  return out;
}

GeoPoint unproject(const PlanarPoint& point, const GeoPoint& reference) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  const double x_scale = std::cos(reference.lat * kDegToRad) * kMetersPerDegree;
  return {reference.lat + point.y / kMetersPerDegree, reference.lon + point.x / x_scale,
          point.weight};
}

namespace {

double cross(const PlanarPoint& o, const PlanarPoint& a, const PlanarPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

double convex_hull_area(std::span<const PlanarPoint> points) {
  if (points.size() < 3) return 0.0;
  std::vector<PlanarPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const PlanarPoint& a, const PlanarPoint& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<PlanarPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  if (k < 4) return 0.0;  // closed chain of fewer than three vertices
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i)
    twice += hull[i].x * hull[i + 1].y - hull[i + 1].x * hull[i].y;
  return std::abs(twice) * 0.5;
}

double inflated_area(std::span<const PlanarPoint> points, double radius, double resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw InvalidParameter("inflated_area: resolution must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidParameter("inflated_area: radius must be positive");
  if (points.empty()) return 0.0;

  std::vector<PlanarPoint> by_y(points.begin(), points.end());
  std::sort(by_y.begin(), by_y.end(), [](const PlanarPoint& a, const PlanarPoint& b) {
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
  const double y0 = by_y.front().y - radius;
  const double y1 = by_y.back().y + radius;
  const auto rows = static_cast<std::size_t>(std::ceil((y1 - y0) / resolution));
  const double r2 = radius * radius;

  std::vector<std::pair<double, double>> spans;
  std::size_t lo = 0, hi = 0;
  double area = 0.0;
  for (std::size_t row = 0; row < rows; ++row) {
    const double yc = y0 + (static_cast<double>(row) + 0.5) * resolution;
    while (lo < by_y.size() && by_y[lo].y < yc - radius) ++lo;
    while (hi < by_y.size() && by_y[hi].y <= yc + radius) ++hi;
    spans.clear();
    for (std::size_t i = lo; i < hi; ++i) {
      const double dy = by_y[i].y - yc;
      const double h2 = r2 - dy * dy;
      if (h2 <= 0.0) continue;
      const double h = std::sqrt(h2);
      spans.emplace_back(by_y[i].x - h, by_y[i].x + h);
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    double length = 0.0;
    double start = spans.front().first, end = spans.front().second;
    for (std::size_t s = 1; s < spans.size(); ++s) {
      if (spans[s].first > end) {
        length += end - start;
        start = spans[s].first;
        end = spans[s].second;
      } else {
        end = std::max(end, spans[s].second);
      }
    }
    length += end - start;
    area += length * resolution;
  }
  return area;
}

std::size_t greedy_cover_number(std::span<const PlanarPoint> points, double eps) {
  if (!(eps > 0.0)) throw InvalidParameter("greedy_cover_number: eps must be positive");
  const kernels::Columns cols(points);
  const double eps2 = eps * eps;
  std::vector<std::uint8_t> covered(points.size(), 0);
  std::vector<double> d2(points.size());
  std::size_t picks = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (covered[i]) continue;
    ++picks;
    kernels::squared_distances(cols, points[i].x, points[i].y, d2);
    for (std::size_t j = 0; j < points.size(); ++j)
      if (d2[j] <= eps2) covered[j] = 1;
  }
  return picks;
}

std::size_t greedy_packing_number(std::span<const PlanarPoint> points, double eps) {
  if (!(eps > 0.0)) throw InvalidParameter("greedy_packing_number: eps must be positive");
  const double eps2 = eps * eps;
  std::vector<PlanarPoint> kept;
  for (const auto& p : points) {
    const bool separated = std::all_of(kept.begin(), kept.end(), [&](const PlanarPoint& q) {
      return squared_distance(p, q) > eps2;
    });
    if (separated) kept.push_back(p);
  }
  return kept.size();
}

CoveringPackingResult covering_packing(std::span<const PlanarPoint> points, double eps) {
  return {greedy_cover_number(points, eps), greedy_packing_number(points, eps), eps};
}

std::size_t distinct_positions(std::span<const PlanarPoint> points) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const auto& p : points)
    if (p.weight > 0.0) xy.emplace_back(p.x, p.y);
  std::sort(xy.begin(), xy.end());
  return static_cast<std::size_t>(std::unique(xy.begin(), xy.end()) - xy.begin());
}

double total_weight(std::span<const PlanarPoint> points) noexcept {
  double w = 0.0;
  for (const auto& p : points) w += p.weight;
  return w;
}

UnitFrame UnitFrame::fit(std::span<const PlanarPoint> points) {
  if (points.empty()) return identity();
  double xmin = points.front().x, xmax = xmin, ymin = points.front().y, ymax = ymin;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double extent = std::max(xmax - xmin, ymax - ymin);
  return {xmin, ymin, extent > 0.0 ? extent : 1.0};
}

PlanarPoint UnitFrame::to_unit(const PlanarPoint& p) const noexcept {
  return {(p.x - origin_x) / scale, (p.y - origin_y) / scale, p.weight};
}

PlanarPoint UnitFrame::from_unit(const PlanarPoint& p) const noexcept {
  return {p.x * scale + origin_x, p.y * scale + origin_y, p.weight};
}

}  // namespace rnplan
