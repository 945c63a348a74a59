#include "dmdgp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>

namespace dmdgp {

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

Instance::Instance(int dimension, int n, EdgeMap edges, Embedding initial_embedding)
    : dimension_(dimension), n_(n), edges_(std::move(edges)), initial_(std::move(initial_embedding)) {}

std::optional<double> Instance::distance(int a, int b) const {
  const auto it = edges_.find(make_edge(a, b));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<int, double>> Instance::pruning_predecessors(int v) const {
  std::vector<std::pair<int, double>> out;
  for (int u = 1; u < v - dimension_; ++u) {
    if (auto d = distance(u, v)) out.emplace_back(u, *d);
  }
  return out;
}

double Instance::max_distance() const {
  double best = 0.0;
  for (const auto& [e, d] : edges_) best = std::max(best, d);
  return best;
}

Instance Instance::discretization_only() const {
  EdgeMap kept;
  for (const auto& [e, d] : edges_) {
    if (classify(e) == EdgeKind::Discretization) kept.emplace(e, d);
  }
  return Instance(dimension_, n_, std::move(kept), initial_);
}

Instance Instance::with_edge(int a, int b, double d) const {
  EdgeMap edges = edges_;
  edges[make_edge(a, b)] = d;
  return Instance(dimension_, n_, std::move(edges), initial_);
}

Instance Instance::without_edge(int a, int b) const {
  EdgeMap edges = edges_;
  edges.erase(make_edge(a, b));
  return Instance(dimension_, n_, std::move(edges), initial_);
}

bool operator==(const Instance& x, const Instance& y) {
  if (x.dimension_ != y.dimension_ || x.n_ != y.n_ || x.edges_ != y.edges_ ||
      x.initial_.size() != y.initial_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < x.initial_.size(); ++i) {
    if (x.initial_[i].size() != y.initial_[i].size() || x.initial_[i] != y.initial_[i]) {
      return false;
    }
  }
  return true;
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::Malformed: return "Malformed";
    case ViolationCode::NonpositiveDistance: return "NonpositiveDistance";
    case ViolationCode::MissingWindowEdge: return "MissingWindowEdge";
    case ViolationCode::TooFewPredecessors: return "TooFewPredecessors";
    case ViolationCode::DegenerateSimplex: return "DegenerateSimplex";
    case ViolationCode::InvalidInitialEmbedding: return "InvalidInitialEmbedding";
  }
  return "Unknown";
}

bool ValidationReport::contains(ViolationCode code, int vertex) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code && v.vertex == vertex; });
}

bool ValidationReport::contains(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << to_string(v.code);
    if (v.vertex > 0) out << " at vertex " << v.vertex;
    if (!v.detail.empty()) out << ": " << v.detail;
    out << '\n';
  }
  return out.str();
}

ValidationReport validate(const Instance& inst, const Tolerance& tol) {
  ValidationReport report;
  auto add = [&](ViolationCode code, int vertex, std::string detail) {
    report.violations.push_back({code, vertex, std::move(detail)});
  };

  const int k = inst.dimension();
  const int n = inst.size();
  if (k < 1) {
    add(ViolationCode::Malformed, 0, fmt::format("dimension {} < 1", k));
    return report;
  }
  if (n < k) {
    add(ViolationCode::Malformed, 0, fmt::format("n = {} is smaller than the dimension {}", n, k));
    return report;
  }
  const auto& init = inst.initial_embedding();
  if (static_cast<int>(init.size()) != k) {
    add(ViolationCode::Malformed, 0,
        fmt::format("initial embedding has {} points, expected {}", init.size(), k));
    return report;
  }
  for (int i = 0; i < k; ++i) {
    if (init[i].size() != k || !init[i].allFinite()) {
      add(ViolationCode::Malformed, i + 1, "initial point has wrong dimension or is not finite");
      return report;
    }
  }
  bool edges_ok = true;
  for (const auto& [e, d] : inst.edges()) {
    if (e.u < 1 || e.v > n || e.u >= e.v) {
      add(ViolationCode::Malformed, e.v, fmt::format("edge {{{},{}}} out of range", e.u, e.v));
      edges_ok = false;
    } else if (!std::isfinite(d)) {
      add(ViolationCode::Malformed, e.v, fmt::format("edge {{{},{}}} has non-finite distance", e.u, e.v));
      edges_ok = false;
    } else if (d <= 0.0) {
      add(ViolationCode::NonpositiveDistance, e.v,
          fmt::format("d({},{}) = {}", e.u, e.v, d));
      edges_ok = false;
    }
  }
  if (!edges_ok) return report;

  for (const auto& [e, d] : inst.edges()) {
    if (e.v > k) continue;
    const double actual = (init[e.u - 1] - init[e.v - 1]).norm();
    if (std::abs(actual - d) > tol.band(d)) {
      add(ViolationCode::InvalidInitialEmbedding, e.v,
          fmt::format("|x{} - x{}| = {:.17g} but d = {:.17g}", e.u, e.v, actual, d));
    }
  }

  for (int v = k + 1; v <= n; ++v) {
    int predecessors = 0;
    for (int u = 1; u < v; ++u) predecessors += inst.has_edge(u, v) ? 1 : 0;
    if (predecessors < k) {
      add(ViolationCode::TooFewPredecessors, v,
          fmt::format("{} adjacent predecessors, need {}", predecessors, k));
    }

    bool clique = true;
    for (int a = v - k; a <= v; ++a) {
      for (int b = a + 1; b <= v; ++b) {
        if (!inst.has_edge(a, b)) {
          clique = false;
          add(ViolationCode::MissingWindowEdge, v, fmt::format("missing edge {{{},{}}}", a, b));
        }
      }
    }
    if (!clique) continue;

    // Content of the (K-1)-simplex on ranks v-K..v-1, from distances alone.
    Eigen::MatrixXd sq(k, k);
    double scale = 0.0;
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        const double d = a == b ? 0.0 : *inst.distance(v - k + a, v - k + b);
        sq(a, b) = d * d;
        scale = std::max(scale, d);
      }
    }
    try {
      const double content = cayley_menger_volume(sq, k - 1);
      if (!(content > kDegenerateContent * std::pow(scale, k - 1))) {
        add(ViolationCode::DegenerateSimplex, v,
            fmt::format("window {}..{} has content {:.3e}", v - k, v - 1, content));
      }
    } catch (const Error& err) {
      add(ViolationCode::DegenerateSimplex, v, err.what());
    }
  }
  return report;
}

Embedding regular_simplex_vertices(int k, int m) {
  if (k < 1 || m < 1 || m > k + 1) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("a regular simplex in R^{} has at most {} vertices", k, k + 1));
  }
  Embedding pts;
  pts.push_back(Point::Zero(k));
  for (int j = 1; j < m; ++j) {
    Point centroid = Point::Zero(k);
    for (const auto& p : pts) centroid += p;
    centroid /= static_cast<double>(j);
    // Height of a unit regular j-simplex over its base facet.
    centroid[j - 1] = std::sqrt((j + 1.0) / (2.0 * j));
    pts.push_back(centroid);
  }
  return pts;
}

Instance counterexample(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "counterexample needs K >= 1");
  const int n = k + 3;
  EdgeMap edges;
  for (int j = 1; j <= n; ++j) {
    for (int i = j + 1; i <= n && i - j <= k; ++i) edges.emplace(Edge{j, i}, 1.0);
  }
  edges.emplace(Edge{1, n}, 1.0);
  return Instance(k, n, std::move(edges), regular_simplex_vertices(k, k));
}

namespace {

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

GeneratedInstance random_instance(int k, int n, double pruning_prob, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, fmt::format("dimension {} < 1", k));
  if (n <= k) throw Error(ErrorCode::InvalidArgument, fmt::format("need n > K, got n = {}", n));
  if (!(pruning_prob >= 0.0 && pruning_prob <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "pruning probability must lie in [0, 1]");
  }

  std::mt19937_64 rng(seed);
  Embedding pts;
  pts.reserve(n);
  int rejections = 0;
  while (static_cast<int>(pts.size()) < n) {
    Point p(k);
    for (int c = 0; c < k; ++c) p[c] = unit_draw(rng);
    pts.push_back(std::move(p));
    const int m = static_cast<int>(pts.size());

    bool generic = true;
    for (int width : {k, k + 1}) {
      if (m < width) continue;
      const std::span<const Point> window(pts.data() + (m - width), width);
      if (simplex_volume(window) < kGenericContent) generic = false;
    }
    if (!generic) {
      pts.pop_back();
      if (++rejections > 1000) {
        throw Error(ErrorCode::GenericityFailure,
                    fmt::format("more than 1000 rejected draws (K = {}, n = {})", k, n));
      }
    }
  }

  EdgeMap edges;
  for (int j = 1; j <= n; ++j) {
    for (int i = j + 1; i <= n; ++i) {
      const double d = (pts[i - 1] - pts[j - 1]).norm();
      if (i - j <= k) {
        edges.emplace(Edge{j, i}, d);
      } else if (unit_draw(rng) < pruning_prob) {
        edges.emplace(Edge{j, i}, d);
      }
    }
  }
  Embedding initial(pts.begin(), pts.begin() + k);
  return {Instance(k, n, std::move(edges), std::move(initial)), std::move(pts)};
}

double max_edge_residual(const Instance& inst, const Embedding& x) {
  double worst = 0.0;
  for (const auto& [e, d] : inst.edges()) {
    const double actual = (x.at(e.u - 1) - x.at(e.v - 1)).norm();
    worst = std::max(worst, std::abs(actual - d) / d);
  }
  return worst;
}

bool satisfies_all_edges(const Instance& inst, const Embedding& x, double atol, double rtol) {
  if (static_cast<int>(x.size()) != inst.size()) return false;
  for (const auto& [e, d] : inst.edges()) {
    const double actual = (x[e.u - 1] - x[e.v - 1]).norm();
    if (!(std::abs(actual - d) <= atol + rtol * d)) return false;
  }
  return true;
}

}  // namespace dmdgp
