#include "rnplan/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "rnplan/analytics.hpp"
#include "rnplan/errors.hpp"

namespace rnplan::io {

using json = nlohmann::ordered_json;

const char* to_string(CoordinateMode mode) noexcept {
  return mode == CoordinateMode::geographic ? "geographic" : "planar";
}

PointFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".csv") return PointFormat::csv;
  if (ext == ".geojson" || ext == ".json") return PointFormat::geojson;
  throw ParseError("cannot infer point format from extension of " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(const std::string& field) {
  if (field.empty()) return std::nullopt;
  const char* begin = field.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto res = std::from_chars(begin, field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

PointTable parse_csv(const std::string& text, bool population_required, bool allow_empty) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("CSV: missing header", line_no);
  for (auto& h : header) h = lower(h);
  const auto column = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };

  PointTable table;
  std::optional<std::size_t> a, b;
  if (column("lat") && column("lon")) {
    table.mode = CoordinateMode::geographic;
    a = column("lat");
    b = column("lon");
  } else if (column("x") && column("y")) {
    table.mode = CoordinateMode::planar;
    a = column("x");
    b = column("y");
  } else {
    throw ParseError("CSV: header must name lat,lon or x,y columns", line_no);
  }
  const auto pop = column("population");
  if (population_required && !pop) throw ParseError("CSV: header lacks a population column", line_no);

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw ParseError("CSV line " + std::to_string(line_no) + ": expected " +
                           std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    const auto first = parse_number(fields[*a]);
    const auto second = parse_number(fields[*b]);
    const auto weight = pop ? parse_number(fields[*pop]) : std::optional<double>(1.0);
    if (!first || !second || !weight)
      throw ParseError("CSV line " + std::to_string(line_no) + ": non-numeric field", line_no);
    if (!(*weight > 0.0)) {
      ++table.dropped;
      continue;
    }
    if (table.mode == CoordinateMode::geographic) {
      const GeoPoint g{*first, *second, *weight};
      if (!g.valid())
        throw ParseError("CSV line " + std::to_string(line_no) + ": coordinates out of range",
                         line_no);
      table.geo.push_back(g);
    } else {
      table.planar.push_back({*first, *second, *weight});
    }
  }
  if (table.size() == 0 && !allow_empty)
    throw ParseError("CSV: no rows with positive population", line_no);
  return table;
}

PointTable parse_geojson(const std::string& text, bool population_required,
                         bool allow_empty) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array())
    throw ParseError("GeoJSON: expected a FeatureCollection with a features array");

  PointTable table;
  if (doc.contains("coordinate_mode") && doc["coordinate_mode"] == "planar")
    table.mode = CoordinateMode::planar;

  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    const std::string where = "GeoJSON feature " + std::to_string(i);
    if (!f.is_object() || !f.contains("geometry") || !f["geometry"].is_object())
      throw ParseError(where + ": missing geometry");
    const auto& g = f["geometry"];
    if (g.value("type", "") != "Point")
      throw ParseError(where + ": geometry type " + g.value("type", std::string("<none>")) +
                       " is not Point");
    const auto& c = g.contains("coordinates") ? g["coordinates"] : json();
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
      throw ParseError(where + ": malformed coordinates");
    double weight = 1.0;
    const bool has_pop = f.contains("properties") && f["properties"].is_object() &&
                         f["properties"].contains("population");
    if (has_pop) {
      const auto& p = f["properties"]["population"];
      if (!p.is_number()) throw ParseError(where + ": population is not numeric");
      weight = p.get<double>();
    } else if (population_required) {
      throw ParseError(where + ": missing population property");
    }
    if (!(weight > 0.0)) {
      ++table.dropped;
      continue;
    }
    const double c0 = c[0].get<double>();
    const double c1 = c[1].get<double>();
    if (table.mode == CoordinateMode::planar) {
      table.planar.push_back({c0, c1, weight});
    } else {
      const GeoPoint gp{c1, c0, weight};
      if (!gp.valid()) throw ParseError(where + ": coordinates out of range");
      table.geo.push_back(gp);
    }
  }
  if (table.size() == 0 && !allow_empty)
    throw ParseError("GeoJSON: no features with positive population");
  return table;
}

}  // namespace

PointTable parse_population_csv(const std::string& text) { return parse_csv(text, true, false); }
PointTable parse_population_geojson(const std::string& text) {
  return parse_geojson(text, true, false);
}

PointTable ingest_population(const std::filesystem::path& path, PointFormat format) {
  const std::string text = read_file(path);
  return format == PointFormat::csv ? parse_csv(text, true, false)
                                    : parse_geojson(text, true, false);
}

PointTable ingest_sites(const std::filesystem::path& path, PointFormat format) {
  const std::string text = read_file(path);
  return format == PointFormat::csv ? parse_csv(text, false, true)
                                    : parse_geojson(text, false, true);
}

// ---------------------------------------------------------------------------
// Coordinates

std::array<double, 2> CoordinateSystem::to_output(const PlanarPoint& p) const {
  if (mode == CoordinateMode::planar) return {p.x, p.y};
  const GeoPoint g = unproject(p, reference);
  return {g.lon, g.lat};
}

PlanarPoint CoordinateSystem::to_planar(const PointTable& table, std::size_t i) const {
  if (table.mode != mode) throw ParseError("coordinate mode mismatch between input files");
  if (mode == CoordinateMode::planar) return table.planar.at(i);
  const GeoPoint g = table.geo.at(i);
  return project_to_plane(std::span<const GeoPoint>(&g, 1), reference).front();
}

std::vector<PlanarPoint> CoordinateSystem::to_planar(const PointTable& table) const {
  if (table.mode != mode) throw ParseError("coordinate mode mismatch between input files");
  if (mode == CoordinateMode::planar) return table.planar;
  return project_to_plane(table.geo, reference);
}

// ---------------------------------------------------------------------------
// Writers

namespace {

json collection(const CoordinateSystem& cs) {
  json doc;
  doc["type"] = "FeatureCollection";
  doc["coordinate_mode"] = to_string(cs.mode);
  if (cs.mode == CoordinateMode::geographic)
    doc["projection_reference"] = {cs.reference.lon, cs.reference.lat};
  doc["features"] = json::array();
  return doc;
}

json point_feature(const std::array<double, 2>& xy, json properties) {
  json f;
  f["type"] = "Feature";
  f["geometry"] = {{"type", "Point"}, {"coordinates", {xy[0], xy[1]}}};
  f["properties"] = std::move(properties);
  return f;
}

}  // namespace

std::string points_geojson(std::span<const PlanarPoint> points, const CoordinateSystem& cs) {
  json doc = collection(cs);
  for (std::size_t i = 0; i < points.size(); ++i)
    doc["features"].push_back(
        point_feature(cs.to_output(points[i]), {{"id", i}, {"population", points[i].weight}}));
  return doc.dump(2) + "\n";
}

std::string graph_geojson(const BackhaulGraph& graph, const CoordinateSystem& cs) {
  json doc = collection(cs);
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    const auto& vert = graph.vertices[v];
    doc["features"].push_back(
        point_feature(cs.to_output(vert.position), {{"id", v}, {"kind", to_string(vert.kind)}}));
  }
  for (const Edge& e : graph.edges) {
    const auto a = cs.to_output(graph.vertices.at(e.from).position);
    const auto b = cs.to_output(graph.vertices.at(e.to).position);
    json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "LineString"}, {"coordinates", {{a[0], a[1]}, {b[0], b[1]}}}};
    f["properties"] = {{"from", e.from},
                       {"to", e.to},
                       {"length_m", e.length},
                       {"normalized_length", e.normalized_length}};
    doc["features"].push_back(std::move(f));
  }
  return doc.dump(2) + "\n";
}

BackhaulGraph parse_graph_geojson(const std::string& text, CoordinateSystem* cs_out) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("graph GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array())
    throw ParseError("graph GeoJSON: expected a FeatureCollection");

  CoordinateSystem cs;
  cs.mode = doc.value("coordinate_mode", "planar") == "geographic" ? CoordinateMode::geographic
                                                                    : CoordinateMode::planar;
  if (cs.mode == CoordinateMode::geographic) {
    const auto& ref = doc["projection_reference"];
    if (!ref.is_array() || ref.size() != 2)
      throw ParseError("graph GeoJSON: geographic graph lacks projection_reference");
    cs.reference = {ref[1].get<double>(), ref[0].get<double>(), 1.0};
  }

  BackhaulGraph graph;
  std::vector<std::pair<std::size_t, Vertex>> vertices;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    const std::string where = "graph GeoJSON feature " + std::to_string(i);
    try {
      const auto& props = f.at("properties");
      const std::string type = f.at("geometry").at("type").get<std::string>();
      if (type == "Point") {
        const auto& c = f["geometry"].at("coordinates");
        PlanarPoint p;
        if (cs.mode == CoordinateMode::planar) {
          p = {c.at(0).get<double>(), c.at(1).get<double>(), 1.0};
        } else {
          const GeoPoint g{c.at(1).get<double>(), c.at(0).get<double>(), 1.0};
          p = project_to_plane(std::span<const GeoPoint>(&g, 1), cs.reference).front();
        }
        const std::string kind = props.at("kind").get<std::string>();
        VertexKind vk;
        if (kind == "ap") vk = VertexKind::access_point;
        else if (kind == "terrestrial_bn") vk = VertexKind::terrestrial_bn;
        else if (kind == "non_terrestrial_bn") vk = VertexKind::non_terrestrial_bn;
        else throw ParseError(where + ": unknown vertex kind " + kind);
        vertices.emplace_back(props.at("id").get<std::size_t>(), Vertex{p, vk});
      } else if (type == "LineString") {
        graph.edges.push_back({props.at("from").get<std::size_t>(),
                               props.at("to").get<std::size_t>(),
                               props.at("length_m").get<double>(),
                               props.value("normalized_length", 0.0)});
      } else {
        throw ParseError(where + ": unsupported geometry " + type);
      }
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  std::sort(vertices.begin(), vertices.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].first != i) throw ParseError("graph GeoJSON: vertex ids are not 0..n-1");
    graph.vertices.push_back(vertices[i].second);
  }
  if (cs_out) *cs_out = cs;
  return graph;
}

std::string graph_dot(const BackhaulGraph& graph) {
  std::ostringstream out;
  out << "graph backhaul {\n";
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    const auto& vert = graph.vertices[v];
    const char* shape = vert.kind == VertexKind::access_point         ? "circle"
                        : vert.kind == VertexKind::terrestrial_bn ? "box"
                                                                  : "triangle";
    out << "  v" << v << " [kind=\"" << to_string(vert.kind) << "\", shape=" << shape
        << ", pos=\"" << format_double(vert.position.x) << "," << format_double(vert.position.y)
        << "!\"];\n";
  }
  for (const Edge& e : graph.edges)
    out << "  v" << e.from << " -- v" << e.to << " [length_m=" << format_double(e.length)
        << "];\n";
  out << "}\n";
  return out.str();
}

std::string dynamics_csv(std::span<const DynamicsSample> trace, double scale) {
  std::string out = "step,vertex_id,radius,speed,infected_flag\n";
  out.reserve(trace.size() * 40);
  for (const auto& s : trace) {
    out += std::to_string(s.step);
    out += ',';
    out += std::to_string(s.vertex);
    out += ',';
    out += format_double(s.radius * scale);
    out += ',';
    out += format_double(s.speed * scale);
    out += ',';
    out += s.infected ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string search_trace_json(const SearchTrace& trace) {
  json doc;
  doc["k0"] = trace.k0;
  doc["k_hat"] = trace.k_hat;
  doc["evaluated"] = json::array();
  for (const auto& [k, rho] : trace.evaluated) doc["evaluated"].push_back({{"k", k}, {"rho", rho}});
  doc["k_star"] = trace.k_star;
  doc["rho_star"] = trace.rho_star;
  return doc.dump(2) + "\n";
}

namespace {

json metrics_object(const NetworkMetrics& m, const BackhaulGraph& graph) {
  json doc;
  doc["average_hop_count"] = m.average_hop_count;
  doc["max_hop_count"] = m.max_hop_count;
  doc["per_bn_ap_count"] = json::array();
  for (const auto& [bn, count] : m.per_bn_ap_count)
    doc["per_bn_ap_count"].push_back(
        {{"bn", bn}, {"kind", to_string(graph.vertices.at(bn).kind)}, {"aps", count}});
  doc["mean_bn_load"] = m.mean_bn_load;
  doc["max_bn_load"] = m.max_bn_load;
  doc["fairness"] = m.fairness;
  doc["total_backhaul_length"] = m.total_backhaul_length;
  return doc;
}

}  // namespace

std::string metrics_json(const NetworkMetrics& metrics, const BackhaulGraph& graph) {
  return metrics_object(metrics, graph).dump(2) + "\n";
}

std::string sweep_json(std::span<const SweepRow> rows, const CoordinateSystem& cs) {
  json doc = json::array();
  for (const auto& row : rows) {
    json rec;
    rec["m"] = row.m;
    rec["placement_strategy"] = to_string(row.plan.strategy);
    rec["ntbn_positions"] = json::array();
    for (const auto& p : row.plan.positions) {
      const auto xy = cs.to_output(p);
      rec["ntbn_positions"].push_back({xy[0], xy[1]});
    }
    rec["steps"] = row.infection.steps;
    const json metrics = metrics_object(row.metrics, row.infection.graph);
    for (const auto& [key, value] : metrics.items()) rec[key] = value;
    doc.push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

}  // namespace rnplan::io
