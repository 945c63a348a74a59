#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmdgp/geometry.hpp"
#include "dmdgp/tolerance.hpp"

namespace dmdgp {

/// Unordered vertex pair, stored with u < v. Vertices are ranks 1..n.
struct Edge {
  int u = 0;
  int v = 0;

  auto operator<=>(const Edge&) const = default;
};

Edge make_edge(int a, int b);

using EdgeMap = std::map<Edge, double>;

/// Discretization edges join ranks at most K apart and define the sphere
/// system at each level; the rest only prune.
enum class EdgeKind { Discretization, Pruning };

/// A distance geometry instance with a fixed vertex order: dimension K, n
/// vertices ranked 1..n, edge distances, and positions of ranks 1..K.
class Instance {
 public:
  Instance() = default;
  Instance(int dimension, int n, EdgeMap edges, Embedding initial_embedding);

  int dimension() const { return dimension_; }
  int size() const { return n_; }
  const EdgeMap& edges() const { return edges_; }
  const Embedding& initial_embedding() const { return initial_; }

  std::optional<double> distance(int a, int b) const;
  bool has_edge(int a, int b) const { return distance(a, b).has_value(); }

  EdgeKind classify(const Edge& e) const {
    return e.v - e.u <= dimension_ ? EdgeKind::Discretization : EdgeKind::Pruning;
  }

  /// Predecessors u of v with v - u > K, paired with d_uv, sorted by rank.
  std::vector<std::pair<int, double>> pruning_predecessors(int v) const;

  /// Largest edge distance.
  double max_distance() const;

  /// Copy with every pruning edge removed.
  Instance discretization_only() const;

  /// Copy with one edge added or overwritten.
  Instance with_edge(int a, int b, double d) const;
  /// Copy with one edge removed.
  Instance without_edge(int a, int b) const;

  friend bool operator==(const Instance& x, const Instance& y);

 private:
  int dimension_ = 0;
  int n_ = 0;
  EdgeMap edges_;
  Embedding initial_;
};

enum class ViolationCode {
  Malformed,
  NonpositiveDistance,
  MissingWindowEdge,
  TooFewPredecessors,
  DegenerateSimplex,
  InvalidInitialEmbedding,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  int vertex = 0;  // 0 when not tied to a vertex
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool contains(ViolationCode code, int vertex) const;
  bool contains(ViolationCode code) const;
  std::string summary() const;
};

/// Checks the discretization conditions: ranks 1..K carry the initial
/// embedding, every later vertex has at least K adjacent predecessors, its K
/// immediate predecessors form a clique with positive simplex content, and the
/// initial embedding realizes the edges among ranks 1..K.
ValidationReport validate(const Instance& inst, const Tolerance& tol = {1e-9, 1e-9});

/// Simplex contents below this are treated as degenerate by validate().
inline constexpr double kDegenerateContent = 1e-10;

/// The counterexample family with 6 solutions: n = K + 3, all pairs at most K
/// ranks apart plus {1, n}, every distance 1, ranks 1..K placed on a unit
/// regular simplex with rank 1 at the origin.
Instance counterexample(int k);

/// First m vertices of the unit regular simplex in R^k built recursively:
/// vertex 1 at the origin, vertex j+1 above the centroid of the first j along e_j.
Embedding regular_simplex_vertices(int k, int m);

struct GeneratedInstance {
  Instance instance;
  Embedding witness;
};

/// Genericity threshold used by random_instance on every window content.
inline constexpr double kGenericContent = 1e-6;

/// Random YES instance: n points uniform in [0,1]^K (resampled while a
/// window of K consecutive points, or of K+1, has content below
/// kGenericContent), all pairs at most K ranks apart, plus each farther pair
/// with probability pruning_prob. Distances come from the points, which are
/// returned as the witness. Deterministic in the seed.
///
/// Throws GenericityFailure after 1000 rejections, InvalidArgument for bad
/// parameters.
GeneratedInstance random_instance(int k, int n, double pruning_prob, std::uint64_t seed);

/// Largest relative edge residual |‖x_u - x_v‖ - d| / d over all edges.
double max_edge_residual(const Instance& inst, const Embedding& x);

/// True iff every edge satisfies |‖x_u - x_v‖ - d| <= atol + rtol * d.
bool satisfies_all_edges(const Instance& inst, const Embedding& x, double atol, double rtol);

}  // namespace dmdgp
