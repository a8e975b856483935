#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rnplan/geometry.hpp"

namespace rnplan {

enum class VertexKind : std::uint8_t { access_point, terrestrial_bn, non_terrestrial_bn };

const char* to_string(VertexKind kind) noexcept;

struct BackhaulNode {
  PlanarPoint position;
  VertexKind kind = VertexKind::terrestrial_bn;
};

struct Vertex {
  PlanarPoint position;  // meters
  VertexKind kind = VertexKind::access_point;

  bool is_bn() const noexcept { return kind != VertexKind::access_point; }
};

struct Edge {
  std::size_t from = 0;  // infector (or either endpoint for oracle edges)
  std::size_t to = 0;    // the AP that was connected
  double length = 0.0;             // meters
  double normalized_length = 0.0;  // in the frame the dynamics ran in
};

/// Vertices are ordered backhaul nodes first (terrestrial, then
/// non-terrestrial), then APs; ids are indices into `vertices`.
struct BackhaulGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  std::size_t ap_count() const noexcept;
  std::size_t bn_count() const noexcept;
};

struct InfectionParams {
  double alpha = 0.01;  // speed floor
  double beta = 0.15;   // initial speed boost
  double gamma = 4.4e5; // radius decay coefficient
  double delta = 0.01;  // time-step size
  std::size_t max_steps = 1'000'000;

  void validate() const;
};

/// alpha + beta / (1 + gamma r^2)
double speed_of(double radius, const InfectionParams& params) noexcept;

/// Steps needed for a single front to cover `max_distance` at the floor speed.
std::size_t worst_case_steps(double max_distance, const InfectionParams& params);

struct Capture {
  std::size_t infector = 0;
  std::size_t target = 0;
  double distance = 0.0;
};

/// Discrete competing-front simulation over a fixed vertex set.
///
/// The first `bn_count` positions are infected at step 0. A vertex infected at
/// step j0 holds radius 0 and speed alpha + beta until step j0 + 1, from which
/// on every step does
///   r[j] = r[j-1] + delta * s[j-1];   s[j] = speed_of(r[j]).
/// An uninfected vertex a is captured at step j by every front with
/// |i - a| < r_i[j]; the winner is the front with the largest overshoot
/// r_i[j] - |i - a|, lowest index on ties.
class InfectionState {
 public:
  InfectionState(std::span<const PlanarPoint> positions, std::size_t bn_count,
                 const InfectionParams& params);

  /// Advances one step and returns the captures it made, ordered by target.
  std::vector<Capture> step();

  std::size_t current_step() const noexcept { return step_; }
  std::size_t vertex_count() const noexcept { return radius_.size(); }
  std::size_t infected_count() const noexcept { return infected_count_; }
  bool all_infected() const noexcept { return infected_count_ == radius_.size(); }

  bool infected(std::size_t v) const { return infected_.at(v) != 0; }
  std::size_t infection_step(std::size_t v) const { return infection_step_.at(v); }
  double radius(std::size_t v) const { return radius_.at(v); }
  double speed(std::size_t v) const { return speed_.at(v); }
  std::optional<std::size_t> infector(std::size_t v) const;
  std::vector<std::size_t> uninfected() const;
  double distance(std::size_t a, std::size_t b) const { return dist_[a * radius_.size() + b]; }

 private:
  bool expanding(std::size_t v) const noexcept {
    return infected_[v] && infection_step_[v] < step_;
  }

  InfectionParams params_;
  std::vector<double> dist_;  // row-major pairwise distances
  std::vector<std::uint8_t> infected_;
  std::vector<std::size_t> infection_step_;
  std::vector<double> radius_;
  std::vector<double> speed_;
  std::vector<std::size_t> infector_;
  std::size_t infected_count_ = 0;
  std::size_t step_ = 0;
};

struct DynamicsSample {
  std::size_t step = 0;
  std::size_t vertex = 0;
  double radius = 0.0;
  double speed = 0.0;
  bool infected = false;
};

struct InfectionOptions {
  // Dynamics run in frame units; edge lengths are reported in both.
  UnitFrame frame = UnitFrame::identity();
  bool record_trace = true;
  std::size_t trace_stride = 1;  // record every n-th step (the final step always)
};

struct InfectionResult {
  BackhaulGraph graph;
  std::vector<DynamicsSample> trace;
  std::size_t steps = 0;
};

/// Runs the simulation until every AP is infected. Throws InvalidParameter
/// without backhaul nodes and NonTermination when params.max_steps is hit.
InfectionResult run_infection(std::span<const PlanarPoint> aps, std::span<const BackhaulNode> bns,
                              const InfectionParams& params, const InfectionOptions& options = {});

/// Exact minimum of the total edge length over forests connecting every AP to
/// some backhaul node: Kruskal on the complete graph with all backhaul nodes
/// contracted into one vertex. O(n^2 log n).
BackhaulGraph optimal_forest(std::span<const PlanarPoint> aps, std::span<const BackhaulNode> bns);

}  // namespace rnplan
