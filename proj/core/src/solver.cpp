#include "dmdgp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

namespace dmdgp {

BpTree::BpTree(std::vector<BpNode> nodes, int n) : nodes_(std::move(nodes)), levels_(n + 1) {
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    levels_.at(static_cast<std::size_t>(nodes_[id].level)).push_back(static_cast<int>(id));
  }
}

int BpTree::ancestor_at_level(int id, int level) const {
  while (id >= 0 && node(id).level > level) id = node(id).parent;
  if (id < 0 || node(id).level != level) {
    throw Error(ErrorCode::IndexOutOfRange, fmt::format("no ancestor at level {}", level));
  }
  return id;
}

Embedding BpTree::path_embedding(int id) const {
  Embedding x(static_cast<std::size_t>(node(id).level));
  for (; id > 0; id = node(id).parent) x[node(id).level - 1] = node(id).point;
  return x;
}

BitVector BpTree::path_labels(int id) const {
  BitVector bits(static_cast<std::size_t>(node(id).level));
  for (; id > 0; id = node(id).parent) {
    bits.set(static_cast<std::size_t>(node(id).level - 1), node(id).lambda == 1);
  }
  return bits;
}

int BpTree::feasible_children(int id) const {
  int count = 0;
  for (int c : node(id).children) {
    if (c >= 0 && node(c).feasible) ++count;
  }
  return count;
}

std::vector<int> SolveResult::mixed_levels() const {
  std::vector<int> out;
  for (const auto& lc : stats.levels) {
    if (lc.one > 0 && lc.two > 0) out.push_back(lc.level);
  }
  return out;
}

namespace {

struct Counters {
  std::size_t pruned = 0;
  std::size_t empty = 0;
  std::size_t tangent = 0;

  Counters& operator+=(const Counters& o) {
    pruned += o.pruned;
    empty += o.empty;
    tangent += o.tangent;
    return *this;
  }
};

// Builds one subtree into its own arena. The serial path uses a single
// builder for the whole tree; the parallel path gives each frontier node its
// own builder and grafts the arenas afterwards.
class Builder {
 public:
  Builder(const Instance& inst, const SolverOptions& opt,
          const std::vector<std::vector<std::pair<int, double>>>& pruning,
          std::atomic<std::size_t>& node_count)
      : inst_(inst), opt_(opt), pruning_(pruning), node_count_(node_count), k_(inst.dimension()),
        n_(inst.size()) {}

  std::vector<BpNode>& nodes() { return nodes_; }
  const Counters& counters() const { return counters_; }
  bool budget_hit() const { return budget_hit_; }

  int add(BpNode node) {
    if (node_count_.fetch_add(1, std::memory_order_relaxed) + 1 > opt_.max_nodes) {
      budget_hit_ = true;
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Depth-first exploration below a feasible node; path holds the points of
  // levels 1..level(id).
  void explore(int id, Embedding& path) {
    if (budget_hit_ || nodes_[id].level >= n_) return;
    expand(id, path);
    for (int lambda : {0, 1}) {
      const int child = nodes_[id].children[lambda];
      if (child < 0 || !nodes_[child].feasible) continue;
      path[nodes_[child].level - 1] = nodes_[child].point;
      explore(child, path);
      if (budget_hit_) return;
    }
  }

  // Creates the children of a feasible node at level >= K.
  void expand(int id, const Embedding& path) {
    const int level = nodes_[id].level + 1;
    const int v = level;
    const std::span<const Point> anchors(path.data() + (v - 1 - k_), static_cast<std::size_t>(k_));
    std::vector<double> radii(static_cast<std::size_t>(k_));
    for (int j = 0; j < k_; ++j) radii[j] = *inst_.distance(v - k_ + j, v);

    Hyperplane plane;
    ExtensionResult ext;
    try {
      plane = nodes_[id].plane ? hyperplane_through(anchors, nodes_[id].plane->normal)
                               : hyperplane_through(anchors);
      ext = extend_positions(anchors, radii);
    } catch (const Error& err) {
      throw Error(err.code(), fmt::format("level {}: {}", level, err.what()));
    }

    for (const auto& z : ext.points) check_window(z, anchors, radii, level);

    if (ext.kind == ExtensionKind::Empty) {
      ++counters_.empty;
      return;
    }
    if (ext.kind == ExtensionKind::Tangent) {
      ++counters_.tangent;
      const Point& z = ext.points.front();
      if (!passes_pruning(z, v, path)) {
        ++counters_.pruned;
        return;
      }
      const int lambda = plane.side(z);
      attach(id, make_node(level, id, z, lambda, true, plane));
      BpNode twin = make_node(level, id, z, 1 - lambda, false, plane);
      twin.tangent = true;
      attach(id, std::move(twin));
      return;
    }

    const Point& z1 = ext.points[0];
    const Point& z2 = ext.points[1];
    const bool ok1 = passes_pruning(z1, v, path);
    const bool ok2 = passes_pruning(z2, v, path);
    counters_.pruned += static_cast<std::size_t>(!ok1) + static_cast<std::size_t>(!ok2);
    if (!ok1 && !ok2) return;

    // The surviving (or first) root is labelled by its side; its sibling
    // gets the complementary label.
    const bool first_primary = ok1;
    const Point& primary = first_primary ? z1 : z2;
    const Point& other = first_primary ? z2 : z1;
    const int lambda = plane.side(primary);
    attach(id, make_node(level, id, primary, lambda, true, plane));
    attach(id, make_node(level, id, other, 1 - lambda, first_primary ? ok2 : ok1, plane));
  }

 private:
  static BpNode make_node(int level, int parent, const Point& z, int lambda, bool feasible,
                          const Hyperplane& plane) {
    BpNode node;
    node.level = level;
    node.parent = parent;
    node.point = z;
    node.lambda = lambda;
    node.feasible = feasible;
    node.plane = plane;
    return node;
  }

  void attach(int parent, BpNode node) {
    const int lambda = node.lambda;
    const int id = add(std::move(node));
    nodes_[parent].children[lambda] = id;
  }

  bool passes_pruning(const Point& z, int v, const Embedding& path) const {
    for (const auto& [u, d] : pruning_[v]) {
      const double actual = (path[u - 1] - z).norm();
      if (std::abs(actual - d) > opt_.atol + opt_.rtol * d) return false;
    }
    return true;
  }

  // Window edges hold by construction of z; a violation means the
  // elimination lost accuracy.
  void check_window(const Point& z, std::span<const Point> anchors, const std::vector<double>& radii,
                    int level) const {
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      const double actual = (anchors[j] - z).norm();
      const double band = 1e3 * (opt_.atol + opt_.rtol * radii[j]);
      if (!(std::abs(actual - radii[j]) <= band)) {
        throw Error(ErrorCode::NumericalBreakdown,
                    fmt::format("level {}: window residual {:.3e} exceeds {:.3e}", level,
                                std::abs(actual - radii[j]), band));
      }
    }
  }

  const Instance& inst_;
  const SolverOptions& opt_;
  const std::vector<std::vector<std::pair<int, double>>>& pruning_;
  std::atomic<std::size_t>& node_count_;
  int k_;
  int n_;
  std::vector<BpNode> nodes_;
  Counters counters_;
  bool budget_hit_ = false;
};

// Renumbers nodes in depth-first preorder with label-0 children first, so the
// arena layout does not depend on how the tree was built.
std::vector<BpNode> canonical_order(std::vector<BpNode> nodes) {
  std::vector<int> order;
  order.reserve(nodes.size());
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    order.push_back(id);
    for (int lambda : {1, 0}) {
      if (nodes[id].children[lambda] >= 0) stack.push_back(nodes[id].children[lambda]);
    }
  }
  std::vector<int> new_id(nodes.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) new_id[order[i]] = static_cast<int>(i);

  std::vector<BpNode> out;
  out.reserve(order.size());
  for (int old : order) {
    BpNode node = std::move(nodes[old]);
    if (node.parent >= 0) node.parent = new_id[node.parent];
    for (auto& c : node.children) {
      if (c >= 0) c = new_id[c];
    }
    out.push_back(std::move(node));
  }
  return out;
}

// Points of the root path of an arena node, padded to n entries.
Embedding arena_path(const std::vector<BpNode>& nodes, int id, int n) {
  Embedding x(static_cast<std::size_t>(n));
  for (; id > 0; id = nodes[id].parent) x[nodes[id].level - 1] = nodes[id].point;
  return x;
}

std::vector<std::vector<std::pair<int, double>>> pruning_table(const Instance& inst) {
  std::vector<std::vector<std::pair<int, double>>> table(static_cast<std::size_t>(inst.size()) + 1);
  for (int v = 1; v <= inst.size(); ++v) table[v] = inst.pruning_predecessors(v);
  return table;
}

void require_valid(const Instance& inst) {
  const auto report = validate(inst);
  if (!report.ok()) {
    throw Error(ErrorCode::InvalidInstance, "invalid instance:\n" + report.summary());
  }
}

}  // namespace

SolveResult solve(const Instance& inst, const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  require_valid(inst);
  const int k = inst.dimension();
  const int n = inst.size();
  const auto pruning = pruning_table(inst);
  std::atomic<std::size_t> node_count{0};

  Builder main(inst, options, pruning, node_count);
  BpNode root;
  root.feasible = true;
  main.add(std::move(root));

  // Ranks 1..K: a feasible label-0 chain with infeasible label-1 placeholders.
  int tip = 0;
  for (int level = 1; level <= k; ++level) {
    BpNode alpha;
    alpha.level = level;
    alpha.parent = tip;
    alpha.point = inst.initial_embedding()[level - 1];
    alpha.feasible = true;
    BpNode dummy = alpha;
    dummy.lambda = 1;
    dummy.feasible = false;
    const int a = main.add(std::move(alpha));
    const int b = main.add(std::move(dummy));
    main.nodes()[tip].children = {a, b};
    tip = a;
  }

  Counters counters;
  bool budget_hit = false;
  Embedding path(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) path[i] = inst.initial_embedding()[i];

  const unsigned threads = std::max(1U, options.threads);
  if (threads == 1 || n == k) {
    main.explore(tip, path);
    counters = main.counters();
    budget_hit = main.budget_hit();
  } else {
    // Breadth-first until the frontier can keep every worker busy.
    std::vector<int> frontier{tip};
    const std::size_t target = 4 * static_cast<std::size_t>(threads);
    while (frontier.size() < target && !frontier.empty() &&
           main.nodes()[frontier.front()].level < n && !main.budget_hit()) {
      std::vector<int> next;
      for (int id : frontier) {
        main.expand(id, arena_path(main.nodes(), id, n));
        for (int c : main.nodes()[id].children) {
          if (c >= 0 && main.nodes()[c].feasible) next.push_back(c);
        }
      }
      frontier = std::move(next);
    }
    counters = main.counters();
    budget_hit = main.budget_hit();

    std::vector<std::vector<BpNode>> parts(frontier.size());
    std::vector<Counters> part_counters(frontier.size());
    std::vector<char> part_budget(frontier.size(), 0);
    std::vector<std::exception_ptr> errors(frontier.size());
    std::atomic<std::size_t> next_index{0};

    auto worker = [&] {
      for (;;) {
        const std::size_t idx = next_index.fetch_add(1);
        if (idx >= frontier.size()) return;
        try {
          Builder local(inst, options, pruning, node_count);
          BpNode seed = main.nodes()[frontier[idx]];
          seed.parent = -1;
          seed.children = {-1, -1};
          local.nodes().push_back(std::move(seed));
          Embedding local_path = arena_path(main.nodes(), frontier[idx], n);
          local.explore(0, local_path);
          parts[idx] = std::move(local.nodes());
          part_counters[idx] = local.counters();
          part_budget[idx] = local.budget_hit() ? 1 : 0;
        } catch (...) {
          errors[idx] = std::current_exception();
        }
      }
    };
    if (!budget_hit) {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    // Graft each local arena under its frontier node.
    auto& nodes = main.nodes();
    for (std::size_t idx = 0; idx < parts.size(); ++idx) {
      auto& part = parts[idx];
      if (part.empty()) continue;
      const int anchor = frontier[idx];
      const int offset = static_cast<int>(nodes.size()) - 1;
      auto remap = [&](int local) { return local == 0 ? anchor : local + offset; };
      nodes[anchor].children = part[0].children;
      for (auto& c : nodes[anchor].children) {
        if (c >= 0) c = remap(c);
      }
      for (std::size_t j = 1; j < part.size(); ++j) {
        BpNode node = std::move(part[j]);
        node.parent = remap(node.parent);
        for (auto& c : node.children) {
          if (c >= 0) c = remap(c);
        }
        nodes.push_back(std::move(node));
      }
      counters += part_counters[idx];
      budget_hit = budget_hit || part_budget[idx] != 0;
    }
  }

  BpTree tree(canonical_order(std::move(main.nodes())), n);

  SolveResult result;
  result.dimension = k;
  result.n = n;
  result.status = budget_hit ? SolveStatus::BudgetExceeded : SolveStatus::Complete;
  result.stats.nodes = tree.size();
  result.stats.pruned_candidates = counters.pruned;
  result.stats.empty_extensions = counters.empty;
  result.stats.tangent_events = counters.tangent;
  for (const auto& node : tree.nodes()) {
    if (node.feasible && node.level > 0) ++result.stats.feasible_nodes;
  }
  for (int level = k + 1; level <= n; ++level) {
    LevelCounts lc;
    lc.level = level;
    for (int id : tree.level(level - 1)) {
      if (!tree.node(id).feasible) continue;
      switch (tree.feasible_children(id)) {
        case 0: ++lc.zero; break;
        case 1: ++lc.one; break;
        default: ++lc.two; break;
      }
    }
    result.stats.levels.push_back(lc);
  }

  for (int id : tree.level(n)) {
    if (!tree.node(id).feasible) continue;
    result.solutions.push_back(tree.path_embedding(id));
    result.chi_sequences.push_back(tree.path_labels(id));
    result.leaves.push_back(id);
  }
  if (options.keep_tree) {
    result.tree = std::move(tree);
  } else {
    result.leaves.clear();
  }
  result.stats.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

BitVector chi(const SolveResult& result, std::size_t solution_index) {
  if (!result.tree) throw Error(ErrorCode::TreeDiscarded, "solve result has no retained tree");
  if (solution_index >= result.leaves.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("solution {} of {}", solution_index, result.leaves.size()));
  }
  return result.tree->path_labels(result.leaves[solution_index]);
}

std::vector<OracleSolution> brute_force(const Instance& inst, const SolverOptions& options) {
  require_valid(inst);
  const int k = inst.dimension();
  const int n = inst.size();
  const int free_levels = n - k;
  if (free_levels > 24) {
    throw Error(ErrorCode::BudgetExceeded,
                fmt::format("brute force over 2^{} sequences exceeds the 2^24 budget", free_levels));
  }

  std::vector<OracleSolution> out;
  const std::uint64_t total = std::uint64_t{1} << free_levels;
  for (std::uint64_t seq = 0; seq < total; ++seq) {
    Embedding x = inst.initial_embedding();
    BitVector labels(static_cast<std::size_t>(n));
    std::optional<Eigen::VectorXd> previous_normal;
    bool alive = true;
    for (int level = k + 1; level <= n && alive; ++level) {
      const int bit = static_cast<int>((seq >> (n - level)) & 1U);
      const std::span<const Point> anchors(x.data() + (level - 1 - k), static_cast<std::size_t>(k));
      std::vector<double> radii(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) radii[j] = *inst.distance(level - k + j, level);

      const Hyperplane plane = previous_normal ? hyperplane_through(anchors, *previous_normal)
                                               : hyperplane_through(anchors);
      const auto ext = extend_positions(anchors, radii);
      previous_normal = plane.normal;

      if (ext.kind == ExtensionKind::Empty) {
        alive = false;
      } else if (ext.kind == ExtensionKind::Tangent) {
        const Point& z = ext.points.front();
        if (plane.side(z) != bit) {
          alive = false;
        } else {
          x.push_back(z);
        }
      } else {
        const int first = plane.side(ext.points[0]);
        x.push_back(first == bit ? ext.points[0] : ext.points[1]);
      }
      labels.set(static_cast<std::size_t>(level - 1), bit == 1);
    }
    if (alive && satisfies_all_edges(inst, x, options.atol, options.rtol)) {
      out.push_back({std::move(labels), std::move(x)});
    }
  }
  return out;
}

double max_pointwise_distance(const Embedding& x, const Embedding& y) {
  if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != y[i].size()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, (x[i] - y[i]).norm());
  }
  return worst;
}

}  // namespace dmdgp
