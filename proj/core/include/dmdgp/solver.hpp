#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "dmdgp/bitvector.hpp"
#include "dmdgp/geometry.hpp"
#include "dmdgp/instance.hpp"

namespace dmdgp {

struct SolverOptions {
  /// Pruning band: an edge fails iff |‖x_u - z‖ - d| > atol + rtol * d.
  double atol = 1e-9;
  double rtol = 1e-9;
  bool keep_tree = false;
  std::size_t max_nodes = std::size_t{1} << 24;
  /// Worker threads for subtree exploration. Output does not depend on it.
  unsigned threads = 1;
};

/// Search tree node. The virtual root sits at level 0 and has no point;
/// ranks 1..n live on levels 1..n.
struct BpNode {
  int level = 0;
  int parent = -1;
  /// Children indexed by their label, -1 when absent.
  std::array<int, 2> children{-1, -1};
  Point point;
  int lambda = 0;
  bool feasible = false;
  /// Infeasible placeholder created next to a single-root (tangent) extension.
  bool tangent = false;
  /// Oriented hyperplane through the K anchors of this level; labels the node
  /// by side. Absent on levels 1..K.
  std::optional<Hyperplane> plane;
};

class BpTree {
 public:
  BpTree() = default;
  BpTree(std::vector<BpNode> nodes, int n);

  int root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const BpNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<BpNode>& nodes() const { return nodes_; }

  /// Node ids on level i (0..n), in depth-first order.
  const std::vector<int>& level(int i) const { return levels_.at(static_cast<std::size_t>(i)); }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }

  int ancestor_at_level(int id, int level) const;
  /// Points of levels 1..level(id) along the root path.
  Embedding path_embedding(int id) const;
  /// Labels of levels 1..level(id) along the root path.
  BitVector path_labels(int id) const;
  /// Number of feasible children.
  int feasible_children(int id) const;

 private:
  std::vector<BpNode> nodes_;
  std::vector<std::vector<int>> levels_;
};

/// Feasible nodes at level-1 grouped by how many feasible children they got.
struct LevelCounts {
  int level = 0;
  std::size_t zero = 0;
  std::size_t one = 0;
  std::size_t two = 0;
};

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t feasible_nodes = 0;
  std::size_t pruned_candidates = 0;
  std::size_t empty_extensions = 0;
  std::size_t tangent_events = 0;
  std::vector<LevelCounts> levels;  // levels K+1..n
  double wall_time_ms = 0.0;
};

enum class SolveStatus { Complete, BudgetExceeded };

struct SolveResult {
  int dimension = 0;
  int n = 0;
  SolveStatus status = SolveStatus::Complete;
  /// Valid embeddings, sorted by label sequence.
  std::vector<Embedding> solutions;
  std::vector<BitVector> chi_sequences;
  /// Leaf node of each solution (only when the tree is kept).
  std::vector<int> leaves;
  std::optional<BpTree> tree;
  SolveStats stats;

  /// Levels where some feasible parent got one feasible child and another
  /// got two. Empty on generic instances.
  std::vector<int> mixed_levels() const;
};

/// Branch-and-Prune: depth-first from level K+1, label 0 first. Each level
/// intersects the K spheres around the immediate predecessors, drops
/// candidates violating an edge to an earlier vertex, and labels survivors
/// by the side of the oriented anchor hyperplane they fall on.
///
/// Throws InvalidInstance when validate() reports violations, and propagates
/// geometry errors annotated with the failing level. Hitting max_nodes
/// returns a partial result with status BudgetExceeded.
SolveResult solve(const Instance& inst, const SolverOptions& options = {});

/// Label sequence of a solution read off the retained tree.
/// Throws TreeDiscarded or IndexOutOfRange.
BitVector chi(const SolveResult& result, std::size_t solution_index);

struct OracleSolution {
  BitVector chi;
  Embedding embedding;
};

/// Exhaustive oracle: walks every one of the 2^(n-K) label sequences without
/// incremental pruning, then keeps the embeddings satisfying every edge.
/// Sorted like solve(). Throws BudgetExceeded when n - K > 24.
std::vector<OracleSolution> brute_force(const Instance& inst, const SolverOptions& options = {});

/// Max over ranks of ‖x_i - y_i‖; infinity if the sizes differ.
double max_pointwise_distance(const Embedding& x, const Embedding& y);

}  // namespace dmdgp
