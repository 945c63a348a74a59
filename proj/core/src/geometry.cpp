#include "dmdgp/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <fmt/format.h>

namespace dmdgp {
namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

int dimension_of(std::span<const Point> points) {
  if (points.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "empty point set");
  }
  const auto k = static_cast<int>(points.front().size());
  for (const auto& p : points) {
    if (p.size() != k) {
      throw Error(ErrorCode::DimensionMismatch, "points of mixed dimension");
    }
  }
  return k;
}

// Matrix without one column.
Eigen::MatrixXd drop_column(const Eigen::MatrixXd& m, int col) {
  Eigen::MatrixXd out(m.rows(), m.cols() - 1);
  for (int c = 0, o = 0; c < m.cols(); ++c) {
    if (c != col) out.col(o++) = m.col(c);
  }
  return out;
}

double det(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 1.0;
  return m.fullPivLu().determinant();
}

// Generalized cross product of the K-1 edge vectors p_j - p_0. Orthogonal to
// the affine hull of the K points; its norm is (K-1)! times their content.
Eigen::VectorXd normal_cofactors(std::span<const Point> points) {
  const int k = dimension_of(points);
  if (static_cast<int>(points.size()) != k) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("need {} points in R^{}, got {}", k, k, points.size()));
  }
  Eigen::MatrixXd edges(k - 1, k);
  for (int j = 1; j < k; ++j) edges.row(j - 1) = (points[j] - points[0]).transpose();
  Eigen::VectorXd cof(k);
  for (int c = 0; c < k; ++c) {
    cof[c] = ((c % 2 == 0) ? 1.0 : -1.0) * det(drop_column(edges, c));
  }
  return cof;
}

void require_spanning(const Eigen::VectorXd& cof, std::span<const Point> points) {
  const int k = static_cast<int>(cof.size());
  const double content = cof.norm() / factorial(k - 1);
  const double threshold = kSpanTolerance * std::pow(diameter(points), k - 1);
  if (!(content > threshold)) {
    throw Error(ErrorCode::DegenerateSpan,
                fmt::format("points do not span a hyperplane in R^{} (content {:.3e})", k,
                            content));
  }
}

void orient_canonically(Eigen::VectorXd& a) {
  for (int i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) > kRankTolerance) {
      if (a[i] < 0) a = -a;
      return;
    }
  }
}

Hyperplane make_plane(std::span<const Point> points, const Eigen::VectorXd* reference) {
  const Eigen::VectorXd cof = normal_cofactors(points);
  require_spanning(cof, points);
  Eigen::VectorXd a = cof / cof.norm();

  if (reference != nullptr) {
    if (reference->size() != a.size()) {
      throw Error(ErrorCode::DimensionMismatch, "reference normal has wrong dimension");
    }
    const double d = a.dot(*reference);
    if (std::abs(d) <= kRankTolerance) {
      orient_canonically(a);
    } else if (d < 0) {
      a = -a;
    }
  } else {
    orient_canonically(a);
  }

  Hyperplane h;
  h.normal = std::move(a);
  double offset = 0.0;
  for (const auto& p : points) offset += h.normal.dot(p);
  h.offset = offset / static_cast<double>(points.size());
  h.pivot_index = 0;
  for (int i = 0; i < h.normal.size(); ++i) {
    if (std::abs(h.normal[i]) > kRankTolerance) {
      h.pivot_index = i;
      break;
    }
  }
  return h;
}

}  // namespace

double diameter(std::span<const Point> points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, (points[i] - points[j]).norm());
    }
  }
  return best;
}

double cayley_menger_volume(const Eigen::MatrixXd& sq_dists, int k) {
  if (k < 0 || sq_dists.rows() != k + 1 || sq_dists.cols() != k + 1) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("expected a {0}x{0} matrix, got {1}x{2}", k + 1, sq_dists.rows(),
                            sq_dists.cols()));
  }
  double scale = 0.0;
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; j <= k; ++j) {
      const double v = sq_dists(i, j);
      if (!std::isfinite(v) || v < 0 || (i == j && v != 0.0) ||
          std::abs(v - sq_dists(j, i)) > 1e-12 * std::max(1.0, std::abs(v))) {
        throw Error(ErrorCode::InvalidArgument,
                    "squared distance matrix must be symmetric, nonnegative, zero-diagonal");
      }
      scale = std::max(scale, v);
    }
  }

  Eigen::MatrixXd bordered = Eigen::MatrixXd::Ones(k + 2, k + 2);
  bordered(0, 0) = 0.0;
  bordered.bottomRightCorner(k + 1, k + 1) = sq_dists;

  const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
  const double denom = std::pow(2.0, k) * factorial(k) * factorial(k);
  const double vol_sq = sign * det(bordered) / denom;

  if (vol_sq < 0.0) {
    const double threshold = 1e-10 * std::pow(scale, k);
    if (-vol_sq <= threshold) return 0.0;
    throw Error(ErrorCode::NegativeDeterminant,
                fmt::format("Cayley-Menger determinant has the wrong sign (volume^2 = {:.6e})",
                            vol_sq));
  }
  return std::sqrt(vol_sq);
}

double simplex_volume(std::span<const Point> points) {
  const auto m = static_cast<int>(points.size());
  if (m == 0) throw Error(ErrorCode::DimensionMismatch, "empty point set");
  Eigen::MatrixXd sq(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) sq(i, j) = (points[i] - points[j]).squaredNorm();
  }
  return cayley_menger_volume(sq, m - 1);
}

Hyperplane hyperplane_through(std::span<const Point> points) {
  return make_plane(points, nullptr);
}

Hyperplane hyperplane_through(std::span<const Point> points, const Eigen::VectorXd& reference) {
  return make_plane(points, &reference);
}

Point reflect(const Hyperplane& h, const Point& p) {
  if (p.size() != h.normal.size()) {
    throw Error(ErrorCode::DimensionMismatch, "point and hyperplane dimensions differ");
  }
  // Any point of the plane serves as the translation; the foot of the
  // perpendicular from the origin stays bounded when the pivot component is small.
  const Point foot = h.offset * h.normal;
  const Point q = p - foot;
  const Point r = q - 2.0 * h.normal * h.normal.dot(q) + foot;
  return r;
}

ExtensionResult extend_positions(std::span<const Point> anchors, std::span<const double> radii,
                                 const ExtensionOptions& options) {
  const int k = dimension_of(anchors);
  if (static_cast<int>(anchors.size()) != k || radii.size() != anchors.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("need {} anchors and radii in R^{}", k, k));
  }
  require_spanning(normal_cofactors(anchors), anchors);

  const Point& w = anchors[k - 1];
  const double dw = radii[k - 1];

  // Linear part: 2 (x_u - x_w) . z = |x_u|^2 - |x_w|^2 - d_u^2 + d_w^2.
  Eigen::MatrixXd a(k - 1, k);
  Eigen::VectorXd b(k - 1);
  for (int u = 0; u + 1 < k; ++u) {
    a.row(u) = 2.0 * (anchors[u] - w).transpose();
    b[u] = anchors[u].squaredNorm() - w.squaredNorm() - radii[u] * radii[u] + dw * dw;
  }

  int free = k - 1;
  double best = -1.0;
  if (options.free_coordinate) {
    free = *options.free_coordinate;
    if (free < 0 || free >= k) {
      throw Error(ErrorCode::InvalidArgument, "free coordinate out of range");
    }
    best = std::abs(det(drop_column(a, free)));
  } else {
    for (int c = 0; c < k; ++c) {
      const double d = std::abs(det(drop_column(a, c)));
      if (d > best) {
        best = d;
        free = c;
      }
    }
  }
  const double pivot_floor = 1e-14 * std::pow(2.0 * diameter(anchors), k - 1);
  if (!(best > pivot_floor)) {
    throw Error(ErrorCode::SingularPivot,
                fmt::format("no invertible {0}x{0} block with coordinate {1} free", k - 1, free));
  }

  std::vector<int> bound;
  for (int c = 0; c < k; ++c) {
    if (c != free) bound.push_back(c);
  }

  // z_B = B^{-1} (b - N z_f) = b_bar - n_bar z_f.
  Eigen::VectorXd b_bar(k - 1);
  Eigen::VectorXd n_bar(k - 1);
  if (k > 1) {
    const Eigen::MatrixXd block = drop_column(a, free);
    const auto lu = block.partialPivLu();
    b_bar = lu.solve(b);
    n_bar = lu.solve(a.col(free));
  }
  Eigen::VectorXd w_bound(k - 1);
  for (int j = 0; j + 1 < k; ++j) w_bound[j] = w[bound[j]];
  const double w_free = w[free];

  // |z - x_w|^2 = d_w^2 as a quadratic in z_f.
  const double qa = n_bar.squaredNorm() + 1.0;
  const double qb = -2.0 * ((b_bar - w_bound).dot(n_bar) + w_free);
  const double qc = (w_bound - b_bar).squaredNorm() + w_free * w_free - dw * dw;

  ExtensionResult result;
  result.free_coordinate = free;
  result.discriminant = qb * qb - 4.0 * qa * qc;

  double scale = 0.0;
  for (double r : radii) scale = std::max(scale, std::abs(r));
  const double band = options.disc_band * scale * scale;

  auto assemble = [&](double zf) {
    Point z(k);
    z[free] = zf;
    for (int j = 0; j + 1 < k; ++j) z[bound[j]] = b_bar[j] - n_bar[j] * zf;
    return z;
  };

  if (result.discriminant < -band) {
    result.kind = ExtensionKind::Empty;
    return result;
  }
  if (result.discriminant <= band) {
    result.kind = ExtensionKind::Tangent;
    result.points.push_back(assemble(-qb / (2.0 * qa)));
    return result;
  }

  // Cancellation-free root pair.
  const double root = std::sqrt(result.discriminant);
  const double q = -0.5 * (qb + (qb >= 0 ? root : -root));
  double r1 = q / qa;
  double r2 = qc / q;
  if (r1 > r2) std::swap(r1, r2);
  result.kind = ExtensionKind::Pair;
  result.points.push_back(assemble(r1));
  result.points.push_back(assemble(r2));
  return result;
}

}  // namespace dmdgp
