#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dmdgp/bitvector.hpp"
#include "dmdgp/solver.hpp"

namespace dmdgp {

/// Row `level` (1-based) of the n x n upper-triangular all-ones matrix:
/// ones from position `level` to n. Throws IndexOutOfRange.
BitVector generator(int level, int n);

/// XOR of generator(i, n) over the given levels (each level toggles once).
BitVector phi(std::span<const int> levels, int n);

/// Every element of the subgroup generated by {generator(i, n) : i in levels},
/// indexed by subset mask. Throws GroupTooLarge above 24 generators.
std::vector<BitVector> group_elements(std::span<const int> levels, int n);

/// Branching structure of a solve result.
struct BranchLevels {
  /// Levels where every solution's path splits into two subtrees that both
  /// reach feasible leaves.
  std::vector<int> levels;
  /// Levels where at least one solution's path splits that way.
  std::vector<int> any_levels;
  /// Levels where some feasible parent has one feasible child and another has
  /// two (counted over all feasible nodes, not only those reaching a leaf).
  std::vector<int> mixed_levels;

  bool degenerate() const { return levels != any_levels || !mixed_levels.empty(); }
};

/// Throws TreeDiscarded if the result carries neither a tree nor level counts.
BranchLevels branch_levels(const SolveResult& result);

/// Whether the path of solution `solution_index` has a sibling branch at
/// rank v that also reaches a feasible leaf. Read from the tree when
/// retained, otherwise from the label sequences (each prefix names one node).
bool upsilon(const SolveResult& result, std::size_t solution_index, int v);

/// Solution with the ranks >= v mirrored across the hyperplane through the
/// solution's K points preceding v. Throws UpsilonFails when upsilon() is false.
Embedding partial_reflection(const SolveResult& result, std::size_t solution_index, int v);

/// Index of the solution closest to x if it is within tol pointwise.
std::optional<std::size_t> find_solution(const SolveResult& result, const Embedding& x, double tol);

struct ReflectionCheck {
  std::size_t solution = 0;
  int level = 0;
  /// Solution matched by the reflected embedding, if any.
  std::optional<std::size_t> image;
  /// Pointwise distance to the expected image (labels xor generator).
  double residual = 0.0;
  bool chi_matches = false;
};

struct OrbitOptions {
  bool check_reflections = true;
  double match_tolerance = 1e-9;
  /// Random group elements tested when the group is too large to list.
  std::size_t samples = std::size_t{1} << 16;
  std::uint64_t seed = 0x5eed;
};

struct SymmetryReport {
  int n = 0;
  int dimension = 0;
  BranchLevels branch;
  std::vector<BitVector> generators;
  std::uint64_t group_order = 1;
  std::vector<BitVector> xi_set;
  std::size_t solution_count = 0;
  /// The label set equals xi + Lambda for its smallest member xi.
  bool orbit_verified = false;
  /// |X| equals the group order.
  bool power_of_two = false;
  /// Orbit checked on random group elements instead of the full group.
  bool sampled = false;
  std::size_t tangent_events = 0;
  std::vector<ReflectionCheck> reflection_checks;

  bool degenerate() const { return branch.degenerate() || tangent_events > 0; }
  bool reflections_ok() const;
};

/// Builds Lambda from the branch levels and checks xi + Lambda = Xi and
/// |X| = 2^|I|. Failures are reported, never thrown. Throws InvalidArgument
/// for an empty solution set and GroupTooLarge above 62 branch levels.
SymmetryReport verify_orbit(const SolveResult& result, const OrbitOptions& options = {});

struct DistanceSpectrum {
  /// Cluster representatives, ascending.
  std::vector<double> values;
  std::size_t leaf_count = 0;
  double tolerance = 0.0;
  /// Smallest gap between adjacent clusters (infinity for one cluster).
  double min_gap = 0.0;
  /// Some gap is under ten times the tolerance; the count is unreliable.
  bool ambiguous = false;
  int root = -1;
};

/// Distinct distances between rank u and rank v over the leaves of the first
/// full subtree rooted at level u (every node branches wherever the level
/// allows it). Requires v - u > K and a retained tree.
/// Throws TreeDiscarded, InvalidArgument or SubtreeNotFull.
DistanceSpectrum distance_spectrum(const SolveResult& result, int u, int v);

/// Same, for an explicit subtree root.
DistanceSpectrum distance_spectrum_at(const SolveResult& result, int root, int v);

}  // namespace dmdgp
