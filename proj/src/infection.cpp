#include "rnplan/infection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "rnplan/errors.hpp"
#include "rnplan/kernels.hpp"

namespace rnplan {

const char* to_string(VertexKind kind) noexcept {
  switch (kind) {
    case VertexKind::access_point: return "ap";
    case VertexKind::terrestrial_bn: return "terrestrial_bn";
    case VertexKind::non_terrestrial_bn: return "non_terrestrial_bn";
  }
  return "unknown";
}

std::size_t BackhaulGraph::ap_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      vertices.begin(), vertices.end(), [](const Vertex& v) { return !v.is_bn(); }));
}

std::size_t BackhaulGraph::bn_count() const noexcept { return vertices.size() - ap_count(); }

void InfectionParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidParameter("infection params: alpha must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidParameter("infection params: beta must be nonnegative");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw InvalidParameter("infection params: gamma must be nonnegative");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidParameter("infection params: delta must be positive");
  if (max_steps == 0) throw InvalidParameter("infection params: max_steps must be positive");
}

double speed_of(double radius, const InfectionParams& params) noexcept {
  return params.alpha + params.beta / (1.0 + params.gamma * radius * radius);
}

std::size_t worst_case_steps(double max_distance, const InfectionParams& params) {
  params.validate();
  // One idle step after infection, then at least alpha * delta per step.
  return static_cast<std::size_t>(std::ceil(max_distance / (params.alpha * params.delta))) + 2;
}

InfectionState::InfectionState(std::span<const PlanarPoint> positions, std::size_t bn_count,
                               const InfectionParams& params)
    : params_(params) {
  params_.validate();
  const std::size_t n = positions.size();
  if (bn_count == 0) throw InvalidParameter("infection: at least one backhaul node is required");
  if (bn_count > n) throw InvalidParameter("infection: bn_count exceeds vertex count");

  dist_.resize(n * n);
  const kernels::Columns cols(positions);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> row(dist_.data() + i * n, n);
    kernels::squared_distances(cols, positions[i].x, positions[i].y, row);
    for (double& d : row) d = std::sqrt(d);
  }

  infected_.assign(n, 0);
  infection_step_.assign(n, 0);
  radius_.assign(n, 0.0);
  speed_.assign(n, 0.0);
  infector_.assign(n, n);
  for (std::size_t b = 0; b < bn_count; ++b) {
    infected_[b] = 1;
    speed_[b] = speed_of(0.0, params_);
  }
  infected_count_ = bn_count;
}

std::vector<Capture> InfectionState::step() {
  ++step_;
  const std::size_t n = radius_.size();
  for (std::size_t v = 0; v < n; ++v)
    if (expanding(v)) radius_[v] += params_.delta * speed_[v];

  std::vector<Capture> captures;
  for (std::size_t target = 0; target < n; ++target) {
    if (infected_[target]) continue;
    std::size_t best = n;
    double best_overshoot = 0.0;
    const double* row = dist_.data() + target * n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!expanding(i) || !(row[i] < radius_[i])) continue;
      const double overshoot = radius_[i] - row[i];
      if (best == n || overshoot > best_overshoot) {
        best = i;
        best_overshoot = overshoot;
      }
    }
    if (best != n) captures.push_back({best, target, row[best]});
  }

  for (std::size_t v = 0; v < n; ++v)
    if (expanding(v)) speed_[v] = speed_of(radius_[v], params_);

  for (const Capture& c : captures) {
    infected_[c.target] = 1;
    infection_step_[c.target] = step_;
    radius_[c.target] = 0.0;
    speed_[c.target] = speed_of(0.0, params_);
    infector_[c.target] = c.infector;
    ++infected_count_;
  }
  return captures;
}

std::optional<std::size_t> InfectionState::infector(std::size_t v) const {
  const std::size_t who = infector_.at(v);
  if (who == infector_.size()) return std::nullopt;
  return who;
}

std::vector<std::size_t> InfectionState::uninfected() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < infected_.size(); ++v)
    if (!infected_[v]) out.push_back(v);
  return out;
}

namespace {

BackhaulGraph make_vertices(std::span<const PlanarPoint> aps, std::span<const BackhaulNode> bns) {
  BackhaulGraph graph;
  graph.vertices.reserve(aps.size() + bns.size());
  for (const auto& bn : bns) {
    if (bn.kind == VertexKind::access_point)
      throw InvalidParameter("backhaul node tagged as access point");
    graph.vertices.push_back({bn.position, bn.kind});
  }
  for (const auto& ap : aps) graph.vertices.push_back({ap, VertexKind::access_point});
  return graph;
}

void record(const InfectionState& state, std::vector<DynamicsSample>& trace) {
  for (std::size_t v = 0; v < state.vertex_count(); ++v)
    trace.push_back({state.current_step(), v, state.radius(v), state.speed(v), state.infected(v)});
}

}  // namespace

InfectionResult run_infection(std::span<const PlanarPoint> aps, std::span<const BackhaulNode> bns,
                              const InfectionParams& params, const InfectionOptions& options) {
  params.validate();
  if (bns.empty()) throw InvalidParameter("run_infection: at least one backhaul node is required");
  if (options.frame.scale <= 0.0) throw InvalidParameter("run_infection: frame scale must be positive");

  InfectionResult result;
  result.graph = make_vertices(aps, bns);
  std::vector<PlanarPoint> unit;
  unit.reserve(result.graph.vertices.size());
  for (const auto& v : result.graph.vertices) unit.push_back(options.frame.to_unit(v.position));

  InfectionState state(unit, bns.size(), params);
  const std::size_t stride = std::max<std::size_t>(1, options.trace_stride);
  if (options.record_trace) record(state, result.trace);

  while (!state.all_infected()) {
    if (state.current_step() >= params.max_steps)
      throw NonTermination("run_infection: " + std::to_string(params.max_steps) +
                               " steps exhausted with " +
                               std::to_string(state.vertex_count() - state.infected_count()) +
                               " APs uninfected",
                           state.uninfected());
    for (const Capture& c : state.step()) {
      const double meters =
          distance(result.graph.vertices[c.infector].position, result.graph.vertices[c.target].position);
      result.graph.edges.push_back({c.infector, c.target, meters, c.distance});
    }
    if (options.record_trace && (state.current_step() % stride == 0 || state.all_infected()))
      record(state, result.trace);
  }
  result.steps = state.current_step();
  return result;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

BackhaulGraph optimal_forest(std::span<const PlanarPoint> aps, std::span<const BackhaulNode> bns) {
  if (bns.empty()) throw InvalidParameter("optimal_forest: at least one backhaul node is required");
  BackhaulGraph graph = make_vertices(aps, bns);
  const std::size_t nb = bns.size();
  const std::size_t na = aps.size();

  // Contracted vertex 0 stands for every backhaul node; AP a is vertex a + 1.
  struct Candidate {
    double length;
    std::size_t u, v;        // contracted ids
    std::size_t from, to;    // graph vertex ids
  };
  std::vector<Candidate> candidates;
  candidates.reserve(na + na * (na - (na > 0 ? 1 : 0)) / 2);
  for (std::size_t a = 0; a < na; ++a) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b) {
      const double d = distance(bns[b].position, aps[a]);
      if (d < best) {
        best = d;
        nearest = b;
      }
    }
    candidates.push_back({best, 0, a + 1, nearest, nb + a});
    for (std::size_t c = a + 1; c < na; ++c)
      candidates.push_back({distance(aps[a], aps[c]), a + 1, c + 1, nb + a, nb + c});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.length, x.u, x.v) < std::tie(y.length, y.u, y.v);
  });

  DisjointSets sets(na + 1);
  for (const Candidate& c : candidates) {
    if (graph.edges.size() == na) break;
    if (sets.unite(c.u, c.v)) graph.edges.push_back({c.from, c.to, c.length, c.length});
  }
  return graph;
}

}  // namespace rnplan
