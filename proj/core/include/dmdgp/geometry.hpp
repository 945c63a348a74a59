#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dmdgp/error.hpp"

namespace dmdgp {

/// A position in R^K.
using Point = Eigen::VectorXd;

/// Positions for ranks 1..m, stored at indices 0..m-1.
using Embedding = std::vector<Point>;

/// Components of a normal smaller than this are treated as zero when picking
/// the pivot index and the canonical orientation.
inline constexpr double kRankTolerance = 1e-12;

/// Relative threshold on the (K-1)-content of an anchor set, scaled by
/// (max pairwise distance)^(K-1). Below it the anchors do not span a hyperplane.
inline constexpr double kSpanTolerance = 1e-12;

/// The hyperplane {x : normal . x = offset}.
struct Hyperplane {
  Eigen::VectorXd normal;
  double offset = 0.0;
  /// Smallest index with |normal[i]| > kRankTolerance.
  int pivot_index = 0;

  double signed_distance(const Point& p) const { return normal.dot(p) - offset; }

  /// Side label of a point: 0 on or below the plane, 1 strictly above.
  int side(const Point& p) const { return normal.dot(p) <= offset ? 0 : 1; }
};

/// Content (length, area, volume, ...) of the K-simplex whose (K+1)x(K+1)
/// matrix of squared edge lengths is given, via the bordered Cayley-Menger
/// determinant. K = 0 is allowed and yields 1.
///
/// Throws DimensionMismatch for a wrongly sized matrix, NegativeDeterminant
/// when the distances cannot come from real points.
double cayley_menger_volume(const Eigen::MatrixXd& sq_dists, int k);

/// Cayley-Menger content of the simplex spanned by the given points
/// (dimension = points.size() - 1).
double simplex_volume(std::span<const Point> points);

/// Hyperplane through K points of R^K. Without a reference the first
/// component of the normal exceeding kRankTolerance is made positive; with a
/// reference the normal is flipped so that normal . reference >= 0, falling
/// back to the canonical rule when the product vanishes.
Hyperplane hyperplane_through(std::span<const Point> points);
Hyperplane hyperplane_through(std::span<const Point> points, const Eigen::VectorXd& reference);

/// Mirror image of p across h: R0 (p - c) + c with R0 = I - 2 a a^T and c
/// the point of h closest to the origin.
Point reflect(const Hyperplane& h, const Point& p);

enum class ExtensionKind { Empty, Tangent, Pair };

struct ExtensionResult {
  ExtensionKind kind = ExtensionKind::Empty;
  std::vector<Point> points;
  /// Discriminant of the quadratic in the free coordinate, before clamping.
  double discriminant = 0.0;
  /// Coordinate left free by the elimination (the others are solved for).
  int free_coordinate = 0;
};

struct ExtensionOptions {
  /// Force the eliminated block to leave this coordinate free. Used to check
  /// that the result does not depend on the pivot choice.
  std::optional<int> free_coordinate;
  /// Tangency band is disc_band * (max radius)^2.
  double disc_band = 1e-12;
};

/// Positions at distance radii[j] from anchors[j] for all K anchors
/// (intersection of K spheres in R^K). The last anchor plays the role of the
/// reference sphere; the other K-1 equations are subtracted from it to get a
/// (K-1)xK linear system, K-1 coordinates are eliminated and the remaining
/// one solves a quadratic.
///
/// Throws DegenerateSpan if the anchors do not span a hyperplane,
/// SingularPivot if no invertible block exists, DimensionMismatch on shape
/// errors.
ExtensionResult extend_positions(std::span<const Point> anchors,
                                 std::span<const double> radii,
                                 const ExtensionOptions& options = {});

/// Largest pairwise distance among the points (0 for fewer than two).
double diameter(std::span<const Point> points);

}  // namespace dmdgp
