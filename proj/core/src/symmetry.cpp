#include "dmdgp/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace dmdgp {
namespace {

// Answers upsilon queries for one result: from the tree (one reachability
// pass) when it is retained, otherwise from the prefixes of the label set.
class UpsilonOracle {
 public:
  explicit UpsilonOracle(const SolveResult& result) : result_(result) {
    if (result.tree) {
      const auto& tree = *result.tree;
      reaches_leaf_.assign(tree.size(), 0);
      // Children always follow their parent in the arena.
      for (std::size_t id = tree.size(); id-- > 0;) {
        const auto& node = tree.node(static_cast<int>(id));
        if (!node.feasible) continue;
        if (node.level == result.n) {
          reaches_leaf_[id] = 1;
          continue;
        }
        for (int c : node.children) {
          if (c >= 0 && reaches_leaf_[c]) reaches_leaf_[id] = 1;
        }
      }
    } else {
      prefixes_.resize(static_cast<std::size_t>(result.n) + 1);
      for (const auto& xi : result.chi_sequences) {
        const auto s = xi.to_string();
        for (std::size_t len = 1; len <= s.size(); ++len) prefixes_[len].insert(s.substr(0, len));
      }
    }
  }

  bool holds(std::size_t solution, int v) const {
    if (result_.tree) {
      const auto& tree = *result_.tree;
      const int on_path = tree.ancestor_at_level(result_.leaves.at(solution), v);
      const auto& parent = tree.node(tree.node(on_path).parent);
      const int sibling = parent.children[1 - tree.node(on_path).lambda];
      return sibling >= 0 && reaches_leaf_[static_cast<std::size_t>(sibling)] != 0;
    }
    auto key = result_.chi_sequences.at(solution).to_string().substr(0, static_cast<std::size_t>(v));
    key.back() = key.back() == '0' ? '1' : '0';
    return prefixes_[static_cast<std::size_t>(v)].contains(key);
  }

 private:
  const SolveResult& result_;
  std::vector<char> reaches_leaf_;
  std::vector<std::unordered_set<std::string>> prefixes_;
};

void check_rank(const SolveResult& result, int v) {
  if (v <= result.dimension || v > result.n) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("rank {} is not a branching rank ({}..{})", v, result.dimension + 1,
                            result.n));
  }
}

void check_solution(const SolveResult& result, std::size_t index) {
  if (index >= result.solutions.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("solution {} of {}", index, result.solutions.size()));
  }
}

Embedding reflect_tail(const SolveResult& result, const Embedding& y, int v) {
  const int k = result.dimension;
  const std::span<const Point> anchors(y.data() + (v - 1 - k), static_cast<std::size_t>(k));
  const Hyperplane plane = hyperplane_through(anchors);
  Embedding out = y;
  for (int r = v; r <= result.n; ++r) out[r - 1] = reflect(plane, y[r - 1]);
  return out;
}

// Every feasible node between the root level and v-1 has as many feasible
// children as its level allows: one on the fixed levels below K, two after.
bool subtree_full(const BpTree& tree, int id, int v, int k) {
  const auto& node = tree.node(id);
  if (!node.feasible) return false;
  if (node.level >= v) return true;
  const int needed = node.level < k ? 1 : 2;
  if (tree.feasible_children(id) < needed) return false;
  for (int c : node.children) {
    if (c >= 0 && tree.node(c).feasible && !subtree_full(tree, c, v, k)) return false;
  }
  return true;
}

void collect_leaves(const BpTree& tree, int id, int v, std::vector<int>& out) {
  const auto& node = tree.node(id);
  if (!node.feasible) return;
  if (node.level == v) {
    out.push_back(id);
    return;
  }
  for (int c : node.children) {
    if (c >= 0) collect_leaves(tree, c, v, out);
  }
}

}  // namespace

BitVector generator(int level, int n) {
  if (n < 1 || level < 1 || level > n) {
    throw Error(ErrorCode::IndexOutOfRange, fmt::format("generator {} of F_2^{}", level, n));
  }
  BitVector g(static_cast<std::size_t>(n));
  for (int j = level; j <= n; ++j) g.set(static_cast<std::size_t>(j - 1), true);
  return g;
}

BitVector phi(std::span<const int> levels, int n) {
  BitVector out(static_cast<std::size_t>(n));
  for (int i : levels) out ^= generator(i, n);
  return out;
}

std::vector<BitVector> group_elements(std::span<const int> levels, int n) {
  if (levels.size() > 24) {
    throw Error(ErrorCode::GroupTooLarge,
                fmt::format("2^{} group elements is too many to list", levels.size()));
  }
  std::vector<BitVector> gens;
  for (int i : levels) gens.push_back(generator(i, n));
  const std::size_t order = std::size_t{1} << gens.size();
  std::vector<BitVector> out(order, BitVector(static_cast<std::size_t>(n)));
  for (std::size_t mask = 1; mask < order; ++mask) {
    // Gray-code style: reuse the element without the lowest set bit.
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    out[mask] = out[mask & (mask - 1)] ^ gens[low];
  }
  return out;
}

BranchLevels branch_levels(const SolveResult& result) {
  if (!result.tree && result.stats.levels.empty() && result.n > result.dimension) {
    throw Error(ErrorCode::TreeDiscarded, "result has neither a tree nor per-level counts");
  }
  BranchLevels out;
  out.mixed_levels = result.mixed_levels();
  if (result.solutions.empty()) return out;

  const UpsilonOracle oracle(result);
  for (int v = result.dimension + 1; v <= result.n; ++v) {
    bool all = true;
    bool any = false;
    for (std::size_t s = 0; s < result.solutions.size(); ++s) {
      const bool h = oracle.holds(s, v);
      all = all && h;
      any = any || h;
    }
    if (all) out.levels.push_back(v);
    if (any) out.any_levels.push_back(v);
  }
  return out;
}

bool upsilon(const SolveResult& result, std::size_t solution_index, int v) {
  check_solution(result, solution_index);
  check_rank(result, v);
  return UpsilonOracle(result).holds(solution_index, v);
}

Embedding partial_reflection(const SolveResult& result, std::size_t solution_index, int v) {
  if (!upsilon(result, solution_index, v)) {
    throw Error(ErrorCode::UpsilonFails,
                fmt::format("solution {} does not branch at rank {}", solution_index, v));
  }
  return reflect_tail(result, result.solutions[solution_index], v);
}

std::optional<std::size_t> find_solution(const SolveResult& result, const Embedding& x,
                                         double tol) {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < result.solutions.size(); ++s) {
    const double d = max_pointwise_distance(result.solutions[s], x);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  if (best && best_d <= tol) return best;
  return std::nullopt;
}

bool SymmetryReport::reflections_ok() const {
  return std::all_of(reflection_checks.begin(), reflection_checks.end(),
                     [](const ReflectionCheck& c) { return c.image.has_value() && c.chi_matches; });
}

SymmetryReport verify_orbit(const SolveResult& result, const OrbitOptions& options) {
  if (result.solutions.empty()) {
    throw Error(ErrorCode::InvalidArgument, "orbit verification needs at least one solution");
  }
  SymmetryReport report;
  report.n = result.n;
  report.dimension = result.dimension;
  report.branch = branch_levels(result);
  report.solution_count = result.solutions.size();
  report.tangent_events = result.stats.tangent_events;
  report.xi_set = result.chi_sequences;
  std::sort(report.xi_set.begin(), report.xi_set.end());

  const auto& levels = report.branch.levels;
  if (levels.size() > 62) {
    throw Error(ErrorCode::GroupTooLarge, fmt::format("{} branch levels", levels.size()));
  }
  for (int i : levels) report.generators.push_back(generator(i, result.n));
  report.group_order = std::uint64_t{1} << levels.size();
  report.power_of_two = report.solution_count == report.group_order;

  const std::unordered_set<BitVector> xi_set(report.xi_set.begin(), report.xi_set.end());
  const BitVector& xi = report.xi_set.front();
  if (levels.size() <= 24) {
    std::unordered_set<BitVector> orbit;
    for (const auto& g : group_elements(levels, result.n)) orbit.insert(xi ^ g);
    report.orbit_verified = orbit == xi_set;
  } else {
    report.sampled = true;
    std::mt19937_64 rng(options.seed);
    bool inside = true;
    for (std::size_t t = 0; t < options.samples && inside; ++t) {
      const std::uint64_t mask = rng() & (report.group_order - 1);
      BitVector g(static_cast<std::size_t>(result.n));
      for (std::size_t b = 0; b < levels.size(); ++b) {
        if ((mask >> b) & 1U) g ^= report.generators[b];
      }
      inside = xi_set.contains(xi ^ g);
    }
    report.orbit_verified = inside && xi_set.size() == report.group_order;
  }

  if (options.check_reflections) {
    std::unordered_map<BitVector, std::size_t> by_chi;
    for (std::size_t s = 0; s < result.chi_sequences.size(); ++s) by_chi[result.chi_sequences[s]] = s;
    const UpsilonOracle oracle(result);
    for (std::size_t s = 0; s < result.solutions.size(); ++s) {
      for (int i : levels) {
        if (!oracle.holds(s, i)) continue;
        ReflectionCheck check;
        check.solution = s;
        check.level = i;
        const Embedding image = reflect_tail(result, result.solutions[s], i);
        const BitVector expected = result.chi_sequences[s] ^ generator(i, result.n);
        check.residual = std::numeric_limits<double>::infinity();
        if (auto it = by_chi.find(expected); it != by_chi.end()) {
          check.residual = max_pointwise_distance(image, result.solutions[it->second]);
          if (check.residual <= options.match_tolerance) check.image = it->second;
        }
        if (!check.image) check.image = find_solution(result, image, options.match_tolerance);
        check.chi_matches = check.image && result.chi_sequences[*check.image] == expected;
        report.reflection_checks.push_back(check);
      }
    }
  }
  return report;
}

DistanceSpectrum distance_spectrum(const SolveResult& result, int u, int v) {
  if (!result.tree) throw Error(ErrorCode::TreeDiscarded, "distance spectrum needs the tree");
  if (u < 1 || v > result.n || v - u <= result.dimension) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("ranks {} and {} must satisfy 1 <= u, v <= n, v - u > K", u, v));
  }
  for (int id : result.tree->level(u)) {
    if (subtree_full(*result.tree, id, v, result.dimension)) {
      return distance_spectrum_at(result, id, v);
    }
  }
  throw Error(ErrorCode::SubtreeNotFull,
              fmt::format("no full subtree spans levels {}..{}", u, v));
}

DistanceSpectrum distance_spectrum_at(const SolveResult& result, int root, int v) {
  if (!result.tree) throw Error(ErrorCode::TreeDiscarded, "distance spectrum needs the tree");
  const auto& tree = *result.tree;
  const int u = tree.node(root).level;
  if (u < 1 || v > result.n || v - u <= result.dimension) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("ranks {} and {} must satisfy 1 <= u, v <= n, v - u > K", u, v));
  }
  if (!subtree_full(tree, root, v, result.dimension)) {
    throw Error(ErrorCode::SubtreeNotFull,
                fmt::format("subtree at node {} does not branch fully down to level {}", root, v));
  }

  std::vector<int> leaves;
  collect_leaves(tree, root, v, leaves);
  const Point& anchor = tree.node(root).point;
  std::vector<double> dists;
  dists.reserve(leaves.size());
  for (int leaf : leaves) dists.push_back((tree.node(leaf).point - anchor).norm());
  std::sort(dists.begin(), dists.end());

  DistanceSpectrum out;
  out.root = root;
  out.leaf_count = leaves.size();
  const double scale = std::max(dists.back(), (tree.node(leaves.front()).point - anchor).norm());
  out.tolerance = 1e-6 * std::max(scale, std::numeric_limits<double>::min());
  out.min_gap = std::numeric_limits<double>::infinity();

  double sum = dists.front();
  std::size_t members = 1;
  for (std::size_t i = 1; i < dists.size(); ++i) {
    const double gap = dists[i] - dists[i - 1];
    if (gap <= out.tolerance) {
      sum += dists[i];
      ++members;
      continue;
    }
    out.values.push_back(sum / static_cast<double>(members));
    out.min_gap = std::min(out.min_gap, gap);
    sum = dists[i];
    members = 1;
  }
  out.values.push_back(sum / static_cast<double>(members));
  out.ambiguous = out.min_gap < 10.0 * out.tolerance;
  return out;
}

}  // namespace dmdgp
