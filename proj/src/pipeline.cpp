#include "rnplan/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rnplan/analytics.hpp"
#include "rnplan/errors.hpp"

namespace rnplan {
namespace {

std::string strip(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  s = s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || !std::isfinite(out))
    throw ConfigError("config: " + key + " is not a number: '" + value + "'");
  return out;
}

std::size_t to_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    throw ConfigError("config: " + key + " is not a nonnegative integer: '" + value + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: " + key + " is not a boolean: '" + value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) {
    part = strip(part);
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "population", "backhaul_nodes", "radius",        "kappa",         "seed",
      "k0",         "raster_resolution", "alpha",      "beta",          "gamma",
      "delta",      "max_steps",      "ntbn_counts",   "ntbn_strategy", "ntbn_sites",
      "normalize",  "trace_stride",   "oracle_max_aps"};
  return keys;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  std::map<std::string, std::string> values;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw ConfigError("config: sections are not supported ([" + key + "])");
    if (!known_keys().count(key)) throw ConfigError("config: unknown key '" + key + "'");
    values[key] = strip(node.data());
  }

  Scenario s;
  const auto path_of = [&](const std::string& key) {
    std::filesystem::path p(values.at(key));
    return p.is_absolute() ? p : base_dir / p;
  };
  if (!values.count("population")) throw ConfigError("config: population is required");
  if (!values.count("backhaul_nodes"))
    throw ConfigError("config: backhaul_nodes is required (at least one backhaul node)");
  if (!values.count("radius")) throw ConfigError("config: radius is required");
  s.population = path_of("population");
  s.backhaul_nodes = path_of("backhaul_nodes");

  for (const auto& [key, v] : values) {
    if (key == "radius") s.plan.radius = to_double(key, v);
    else if (key == "kappa") s.plan.kappa = to_count(key, v);
    else if (key == "seed") s.plan.seed = to_count(key, v);
    else if (key == "k0") s.plan.k0_override = to_count(key, v);
    else if (key == "raster_resolution") s.plan.raster_resolution = to_double(key, v);
    else if (key == "alpha") s.infection.alpha = to_double(key, v);
    else if (key == "beta") s.infection.beta = to_double(key, v);
    else if (key == "gamma") s.infection.gamma = to_double(key, v);
    else if (key == "delta") s.infection.delta = to_double(key, v);
    else if (key == "max_steps") s.infection.max_steps = to_count(key, v);
    else if (key == "normalize") s.normalize = to_bool(key, v);
    else if (key == "trace_stride") s.trace_stride = to_count(key, v);
    else if (key == "oracle_max_aps") s.oracle_max_aps = to_count(key, v);
    else if (key == "ntbn_counts") {
      std::string list = v;
      std::erase(list, '[');
      std::erase(list, ']');
      s.ntbn_counts.clear();
      for (const auto& item : split(list, ',')) s.ntbn_counts.push_back(to_count(key, item));
      if (s.ntbn_counts.empty()) throw ConfigError("config: ntbn_counts is empty");
    } else if (key == "ntbn_strategy") {
      if (v == "weighted-farthest-kmeans") s.ntbn_strategy = PlacementStrategy::weighted_farthest_kmeans;
      else if (v == "manual") s.ntbn_strategy = PlacementStrategy::manual;
      else throw ConfigError("config: unknown ntbn_strategy '" + v + "'");
    } else if (key == "ntbn_sites") {
      for (const auto& site : split(v, ';')) {
        std::istringstream pair(site);
        std::string a, b, extra;
        pair >> a >> b;
        if (a.empty() || b.empty() || (pair >> extra))
          throw ConfigError("config: ntbn_sites entries are 'a b' pairs separated by ';'");
        s.ntbn_sites.emplace_back(to_double(key, a), to_double(key, b));
      }
    }
  }

  try {
    s.plan.validate();
    s.infection.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!std::is_sorted(s.ntbn_counts.begin(), s.ntbn_counts.end()))
    throw ConfigError("config: ntbn_counts must be non-decreasing");
  if (s.ntbn_strategy == PlacementStrategy::manual &&
      s.ntbn_sites.size() < s.ntbn_counts.back())
    throw ConfigError("config: manual strategy needs at least max(ntbn_counts) ntbn_sites");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  return parse_scenario(text, std::filesystem::absolute(path).parent_path());
}

ScenarioData load_data(const Scenario& scenario) {
  const io::PointTable users = io::ingest_population(scenario.population,
                                                     io::format_from_path(scenario.population));
  const io::PointTable sites = io::ingest_sites(scenario.backhaul_nodes,
                                                io::format_from_path(scenario.backhaul_nodes));
  if (sites.size() == 0) throw ConfigError("scenario has no backhaul nodes");
  if (sites.mode != users.mode)
    throw ConfigError("population and backhaul node files use different coordinate modes");

  ScenarioData data;
  data.coordinates.mode = users.mode;
  if (users.mode == io::CoordinateMode::geographic)
    data.coordinates.reference = geo_centroid(users.geo);
  data.users = data.coordinates.to_planar(users);
  for (const auto& p : data.coordinates.to_planar(sites))
    data.terrestrial_bns.push_back({{p.x, p.y, 1.0}, VertexKind::terrestrial_bn});
  data.dropped_rows = users.dropped;
  return data;
}

UnitFrame dynamics_frame(const Scenario& scenario, const APSet& aps,
                         std::span<const BackhaulNode> bns) {
  if (!scenario.normalize) return UnitFrame::identity();
  std::vector<PlanarPoint> all(aps.centers.begin(), aps.centers.end());
  for (const auto& bn : bns) all.push_back(bn.position);
  return UnitFrame::fit(all);
}

void check_step_budget(const InfectionParams& params, const UnitFrame& frame, const APSet& aps,
                       std::span<const BackhaulNode> bns) {
  std::vector<PlanarPoint> all(aps.centers.begin(), aps.centers.end());
  for (const auto& bn : bns) all.push_back(bn.position);
  if (all.empty()) return;
  double xmin = all[0].x, xmax = xmin, ymin = all[0].y, ymax = ymin;
  for (const auto& p : all) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double diagonal = std::hypot(xmax - xmin, ymax - ymin) / frame.scale;
  const std::size_t needed = worst_case_steps(diagonal, params);
  if (needed > params.max_steps)
    throw ConfigError("infection may need up to " + std::to_string(needed) +
                      " steps but max_steps is " + std::to_string(params.max_steps) +
                      "; enable normalize or raise max_steps");
}

namespace {

template <class F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const Scenario& scenario, const std::filesystem::path& out_dir) {
  PipelineResult result;
  stage("output", [&] { std::filesystem::create_directories(out_dir); return 0; });
  result.data = stage("ingest", [&] { return load_data(scenario); });
  const auto& cs = result.data.coordinates;
  const auto& bns = result.data.terrestrial_bns;

  result.plan = stage("plan-aps", [&] {
    APPlan plan = plan_aps(result.data.users, scenario.plan);
    io::write_file_atomic(out_dir / "aps.geojson", io::points_geojson(plan.aps.centers, cs));
    io::write_file_atomic(out_dir / "search_trace.json", io::search_trace_json(plan.trace));
    return plan;
  });

  result.frame = dynamics_frame(scenario, result.plan.aps, bns);
  check_step_budget(scenario.infection, result.frame, result.plan.aps, bns);

  NtbnPlan manual;
  if (scenario.ntbn_strategy == PlacementStrategy::manual) {
    io::PointTable sites;
    sites.mode = cs.mode;
    for (const auto& [a, b] : scenario.ntbn_sites) {
      if (cs.mode == io::CoordinateMode::geographic) sites.geo.push_back({a, b, 1.0});
      else sites.planar.push_back({a, b, 1.0});
    }
    manual = manual_plan(cs.to_planar(sites));
  }

  result.sweep = stage("backhaul", [&] {
    InfectionOptions options;
    options.frame = result.frame;
    options.trace_stride = scenario.trace_stride;
    auto rows = ntbn_sweep(result.plan.aps, bns, scenario.ntbn_counts, scenario.infection,
                           scenario.plan.seed, options,
                           scenario.ntbn_strategy == PlacementStrategy::manual ? &manual : nullptr);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      // Repeated m values produce identical rows and overwrite the same file.
      const std::string stem = "graph_m" + std::to_string(row.m);
      io::write_file_atomic(out_dir / (stem + ".geojson"), io::graph_geojson(row.infection.graph, cs));
      io::write_file_atomic(out_dir / (stem + ".dot"), io::graph_dot(row.infection.graph));
    }
    io::write_file_atomic(out_dir / "dynamics.csv",
                          io::dynamics_csv(rows.front().infection.trace, result.frame.scale));
    io::write_file_atomic(out_dir / "metrics.json", io::sweep_json(rows, cs));
    for (auto& row : rows) row.infection.trace.clear();
    return rows;
  });

  stage("oracle", [&] {
    if (result.plan.aps.k() <= scenario.oracle_max_aps) {
      std::vector<BackhaulNode> all(bns.begin(), bns.end());
      for (const auto& p : result.sweep.front().plan.positions)
        all.push_back({p, VertexKind::non_terrestrial_bn});
      result.oracle = optimal_forest(result.plan.aps.centers, all);
      const double best = total_backhaul_length(*result.oracle);
      const double heuristic = result.sweep.front().metrics.total_backhaul_length;
      if (best > 0.0) result.gap_ratio = heuristic / best;
      else if (heuristic == 0.0) result.gap_ratio = 1.0;
    }
    io::write_file_atomic(out_dir / "report.md", render_report(scenario, result));
    return 0;
  });
  return result;
}

std::string render_report(const Scenario& scenario, const PipelineResult& result) {
  std::ostringstream out;
  const auto& users = result.data.users;
  const CoverageReport coverage = covered_users(result.plan.aps, users);
  out << "# Deployment plan\n\n";
  out << "## Access points\n\n";
  out << "- users: " << users.size() << " points, total weight "
      << io::format_double(coverage.total_weight) << " (" << result.data.dropped_rows
      << " rows dropped with population <= 0)\n";
  out << "- coverage radius R: " << io::format_double(scenario.plan.radius) << " m\n";
  out << "- k0 = " << result.plan.trace.k0 << ", k_hat = " << result.plan.trace.k_hat
      << ", search window [" << result.plan.trace.evaluated.front().first << ", "
      << result.plan.trace.evaluated.back().first << "]\n";
  out << "- k* = " << result.plan.trace.k_star
      << ", rho* = " << io::format_double(result.plan.trace.rho_star) << "\n";
  out << "- covered weight: " << io::format_double(coverage.covered_weight) << " ("
      << io::format_double(coverage.total_weight > 0 ? coverage.covered_weight / coverage.total_weight : 0.0)
      << " of total)\n\n";

  out << "## Backhaul\n\n";
  out << "- terrestrial backhaul nodes: " << result.data.terrestrial_bns.size() << "\n";
  out << "- infection parameters: alpha=" << io::format_double(scenario.infection.alpha)
      << " beta=" << io::format_double(scenario.infection.beta)
      << " gamma=" << io::format_double(scenario.infection.gamma)
      << " delta=" << io::format_double(scenario.infection.delta) << "\n";
  out << "- dynamics frame: " << (scenario.normalize ? "unit square" : "meters") << ", "
      << io::format_double(result.frame.scale) << " m per unit\n\n";
  out << "| NTBNs | steps | avg hops | max hops | mean BN load | max BN load | Jain fairness | "
         "backhaul length (m) |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& row : result.sweep) {
    const auto& m = row.metrics;
    out << "| " << row.m << " | " << row.infection.steps << " | "
        << io::format_double(m.average_hop_count) << " | " << m.max_hop_count << " | "
        << io::format_double(m.mean_bn_load) << " | " << m.max_bn_load << " | "
        << io::format_double(m.fairness) << " | " << io::format_double(m.total_backhaul_length)
        << " |\n";
  }
  out << "\n## Optimality gap\n\n";
  if (result.oracle && result.gap_ratio) {
    out << "- minimum spanning forest length (m=" << result.sweep.front().m
        << "): " << io::format_double(total_backhaul_length(*result.oracle)) << " m\n";
    out << "- infection / optimal length ratio: " << io::format_double(*result.gap_ratio)
        << "\n";
  } else {
    out << "- skipped: " << result.plan.aps.k() << " APs exceeds oracle_max_aps = "
        << scenario.oracle_max_aps << "\n";
  }
  return out.str();
}

}  // namespace rnplan
