#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "rnplan/ap_planner.hpp"
#include "rnplan/geometry.hpp"
#include "rnplan/infection.hpp"
#include "rnplan/ntbn_planner.hpp"

namespace rnplan::io {

enum class CoordinateMode { geographic, planar };
enum class PointFormat { csv, geojson };

const char* to_string(CoordinateMode mode) noexcept;

/// Infers the format from the extension (.csv, .geojson/.json).
PointFormat format_from_path(const std::filesystem::path& path);

/// Points as read from disk. Exactly one of `geo` / `planar` is filled,
/// according to `mode`.
struct PointTable {
  CoordinateMode mode = CoordinateMode::geographic;
  std::vector<GeoPoint> geo;
  std::vector<PlanarPoint> planar;
  std::size_t dropped = 0;  // rows with population <= 0

  std::size_t size() const noexcept {
    return mode == CoordinateMode::geographic ? geo.size() : planar.size();
  }
};

/// CSV with a header naming lat,lon,population (or x,y,population for planar
/// meters), or a GeoJSON FeatureCollection of Point features carrying a
/// numeric `population` property. Rows with population <= 0 are dropped and
/// counted. Throws ParseError (with the 1-based line for CSV) on missing
/// columns, malformed rows, non-Point features, or an empty result.
PointTable ingest_population(const std::filesystem::path& path, PointFormat format);
PointTable parse_population_csv(const std::string& text);
PointTable parse_population_geojson(const std::string& text);

/// Like ingest_population, but the population column is optional (weight 1)
/// and an empty file is not an error. Used for backhaul-node files.
PointTable ingest_sites(const std::filesystem::path& path, PointFormat format);

/// Maps between the planar working frame (meters) and file coordinates.
struct CoordinateSystem {
  CoordinateMode mode = CoordinateMode::planar;
  GeoPoint reference;  // projection origin in geographic mode

  /// [x, y] for planar, [lon, lat] for geographic (GeoJSON axis order).
  std::array<double, 2> to_output(const PlanarPoint& p) const;
  PlanarPoint to_planar(const PointTable& table, std::size_t i) const;
  std::vector<PlanarPoint> to_planar(const PointTable& table) const;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Point features with a `population` property; readable by ingest_population.
std::string points_geojson(std::span<const PlanarPoint> points, const CoordinateSystem& cs);

/// Vertices as Point features (`kind`, `id`) and edges as LineString features
/// (`from`, `to`, `length_m`, `normalized_length`).
std::string graph_geojson(const BackhaulGraph& graph, const CoordinateSystem& cs);
BackhaulGraph parse_graph_geojson(const std::string& text, CoordinateSystem* cs_out = nullptr);

std::string graph_dot(const BackhaulGraph& graph);

/// step,vertex_id,radius,speed,infected_flag; radius and speed are scaled by
/// `scale` (meters per frame unit).
std::string dynamics_csv(std::span<const DynamicsSample> trace, double scale);

std::string search_trace_json(const SearchTrace& trace);
std::string sweep_json(std::span<const SweepRow> rows, const CoordinateSystem& cs);
std::string metrics_json(const NetworkMetrics& metrics, const BackhaulGraph& graph);

/// Shortest round-trip decimal text for a double.
std::string format_double(double value);

}  // namespace rnplan::io
