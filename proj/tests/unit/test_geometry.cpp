#include <doctest.h>

#include <cmath>

#include "dmdgp/error.hpp"
#include "dmdgp/geometry.hpp"
#include "support.hpp"

using namespace dmdgp;
using dmdgp::test::Gen;

namespace {

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

Eigen::MatrixXd sides(double a, double b, double c) {
  Eigen::MatrixXd sq(3, 3);
  sq << 0, a * a, b * b, a * a, 0, c * c, b * b, c * c, 0;
  return sq;
}

double sphere_residual(const Point& z, const std::vector<Point>& anchors,
                       const std::vector<double>& radii) {
  double worst = 0.0;
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    worst = std::max(worst, std::abs((z - anchors[j]).norm() - radii[j]) / radii[j]);
  }
  return worst;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("simplex content from squared distances") {
    Eigen::MatrixXd seg(2, 2);
    seg << 0, 25, 25, 0;
    CHECK(cayley_menger_volume(seg, 1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(cayley_menger_volume(sides(3, 4, 5), 2) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(cayley_menger_volume(sides(1, 2, 1), 2) == doctest::Approx(0.0));
    CHECK(cayley_menger_volume(sides(1, 1, 1), 2) ==
          doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
    CHECK(cayley_menger_volume(Eigen::MatrixXd::Zero(1, 1), 0) == 1.0);

    Eigen::MatrixXd tet = test::squared_distances(
        {pt({0, 0, 0}), pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})});
    CHECK(cayley_menger_volume(tet, 3) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  }

  TEST_CASE("non-embeddable or malformed distance matrices are rejected") {
    try {
      cayley_menger_volume(sides(1, 1, 3), 2);
      FAIL("expected NegativeDeterminant");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NegativeDeterminant);
    }
    try {
      cayley_menger_volume(sides(3, 4, 5), 3);
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
  }

  TEST_CASE("content is invariant under rigid motions") {
    Gen gen(101);
    for (int trial = 0; trial < 200; ++trial) {
      const int k = gen.integer(1, 4);
      std::vector<Point> pts;
      for (int j = 0; j <= k; ++j) pts.push_back(gen.point(k, -2.0, 2.0));
      const Eigen::MatrixXd q = gen.rotation(k);
      const Point shift = gen.point(k, -5.0, 5.0);
      std::vector<Point> moved;
      for (const auto& p : pts) moved.push_back(q * p + shift);
      const double a = cayley_menger_volume(test::squared_distances(pts), k);
      const double b = cayley_menger_volume(test::squared_distances(moved), k);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, a));
      CHECK(simplex_volume(pts) == doctest::Approx(a).epsilon(1e-12));
    }
  }

  TEST_CASE("hyperplane through points with canonical or reference orientation") {
    const std::vector<Point> axis{pt({0, 0}), pt({1, 0})};
    auto h = hyperplane_through(axis);
    CHECK(h.normal[0] == doctest::Approx(0.0));
    CHECK(h.normal[1] == doctest::Approx(1.0));
    CHECK(h.offset == doctest::Approx(0.0));
    CHECK(h.pivot_index == 1);

    h = hyperplane_through(axis, pt({0, -1}));
    CHECK(h.normal[1] == doctest::Approx(-1.0));

    // Orthogonal reference: falls back to the canonical orientation.
    h = hyperplane_through(axis, pt({1, 0}));
    CHECK(h.normal[1] == doctest::Approx(1.0));

    const std::vector<Point> tri{pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})};
    h = hyperplane_through(tri);
    for (int c = 0; c < 3; ++c) CHECK(h.normal[c] == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(h.offset == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(h.pivot_index == 0);
  }

  TEST_CASE("hyperplane contains its points and has a unit normal") {
    Gen gen(7);
    for (int trial = 0; trial < 500; ++trial) {
      const int k = gen.integer(1, 5);
      const auto pts = gen.anchors(k);
      const auto h = hyperplane_through(pts, gen.unit(k));
      CHECK(std::abs(h.normal.norm() - 1.0) <= 1e-12);
      for (const auto& p : pts) CHECK(std::abs(h.signed_distance(p)) <= 1e-10);
      for (int i = 0; i < h.pivot_index; ++i) CHECK(std::abs(h.normal[i]) <= kRankTolerance);
      CHECK(std::abs(h.normal[h.pivot_index]) > kRankTolerance);
    }
  }

  TEST_CASE("coincident points have no hyperplane") {
    const std::vector<Point> pts{pt({1, 1}), pt({1, 1})};
    try {
      hyperplane_through(pts);
      FAIL("expected DegenerateSpan");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateSpan);
    }
  }

  TEST_CASE("reflection examples") {
    Hyperplane x_axis{pt({0, 1}), 0.0, 1};
    CHECK((reflect(x_axis, pt({1, 1})) - pt({1, -1})).norm() < 1e-15);
    Hyperplane vertical{pt({1, 0}), 2.0, 0};
    CHECK((reflect(vertical, pt({2, 7})) - pt({2, 7})).norm() < 1e-15);
    CHECK((reflect(vertical, pt({0, 0})) - pt({4, 0})).norm() < 1e-15);
  }

  TEST_CASE("reflection stays accurate when the pivot component is tiny") {
    Hyperplane h;
    h.normal = pt({1e-9, 1.0}).normalized();
    h.offset = 1.0;
    h.pivot_index = 0;
    const Point p = pt({0.3, -0.7});
    const Point r = reflect(h, p);
    CHECK((reflect(h, r) - p).norm() <= 1e-14);
    CHECK(std::abs(h.signed_distance(r) + h.signed_distance(p)) <= 1e-14);
  }

  TEST_CASE("reflection is an isometric involution") {
    Gen gen(23);
    for (int trial = 0; trial < 2000; ++trial) {
      const int k = gen.integer(1, 5);
      const auto h = hyperplane_through(gen.anchors(k));
      const Point p = gen.point(k, -3.0, 3.0);
      const Point q = gen.point(k, -3.0, 3.0);
      CHECK((reflect(h, reflect(h, p)) - p).norm() <= 1e-12 * std::max(1.0, p.norm()));
      const double d = (p - q).norm();
      CHECK(std::abs((reflect(h, p) - reflect(h, q)).norm() - d) <= 1e-12 * std::max(1.0, d));
      CHECK(std::abs(h.signed_distance(reflect(h, p)) + h.signed_distance(p)) <= 1e-12 * 4.0);
    }
  }

  TEST_CASE("two circles in the plane") {
    const std::vector<Point> anchors{pt({0, 0}), pt({1, 0})};
    auto r = extend_positions(anchors, std::vector<double>{1.0, 1.0});
    REQUIRE(r.kind == ExtensionKind::Pair);
    REQUIRE(r.points.size() == 2);
    bool up = false;
    bool down = false;
    for (const auto& z : r.points) {
      CHECK(z[0] == doctest::Approx(0.5));
      up = up || std::abs(z[1] - std::sqrt(3.0) / 2.0) < 1e-12;
      down = down || std::abs(z[1] + std::sqrt(3.0) / 2.0) < 1e-12;
    }
    CHECK((up && down));

    r = extend_positions(anchors, std::vector<double>{1.0, 3.0});
    CHECK(r.kind == ExtensionKind::Empty);
    CHECK(r.points.empty());
    CHECK(r.discriminant < 0.0);

    const std::vector<Point> apart{pt({0, 0}), pt({2, 0})};
    r = extend_positions(apart, std::vector<double>{1.0, 1.0});
    REQUIRE(r.kind == ExtensionKind::Tangent);
    REQUIRE(r.points.size() == 1);
    CHECK((r.points[0] - pt({1, 0})).norm() < 1e-12);
  }

  TEST_CASE("three spheres agree with the Newton oracle") {
    const std::vector<Point> anchors{pt({0, 0, 0}), pt({1, 0, 0}), pt({0, 1, 0})};
    const std::vector<double> radii{1.0, 1.0, 1.0};
    const auto oracle = test::newton_intersections(anchors, radii, 100, 3);
    REQUIRE(oracle.size() == 2);
    // Frozen from the oracle run above.
    const double h = 0.70710678118654757;
    CHECK((oracle[0] - pt({0.5, 0.5, -h})).norm() < 1e-9);
    CHECK((oracle[1] - pt({0.5, 0.5, h})).norm() < 1e-9);

    const auto r = extend_positions(anchors, radii);
    REQUIRE(r.kind == ExtensionKind::Pair);
    for (const auto& z : r.points) {
      CHECK(sphere_residual(z, anchors, radii) <= 1e-12);
      const double to_oracle = std::min((z - oracle[0]).norm(), (z - oracle[1]).norm());
      CHECK(to_oracle <= 1e-9);
    }
  }

  TEST_CASE("random extensions match the Newton oracle") {
    Gen gen(404);
    for (int trial = 0; trial < 60; ++trial) {
      const int k = gen.integer(2, 4);
      const auto anchors = gen.anchors(k);
      const Point target = gen.point(k, -1.5, 1.5);
      std::vector<double> radii;
      for (const auto& a : anchors) radii.push_back((target - a).norm());
      const auto r = extend_positions(anchors, radii);
      REQUIRE(r.kind == ExtensionKind::Pair);
      const auto oracle = test::newton_intersections(anchors, radii, 100, gen.bits());
      REQUIRE(oracle.size() == 2);
      for (const auto& z : r.points) {
        const double to_oracle = std::min((z - oracle[0]).norm(), (z - oracle[1]).norm());
        CHECK(to_oracle <= 1e-8 * std::max(1.0, z.norm()));
      }
    }
  }

  TEST_CASE("pair roots satisfy every sphere and mirror each other") {
    Gen gen(99);
    for (int trial = 0; trial < 2000; ++trial) {
      const int k = gen.integer(1, 5);
      const auto anchors = gen.anchors(k);
      const Point target = gen.point(k, -2.0, 2.0);
      std::vector<double> radii;
      for (const auto& a : anchors) radii.push_back((target - a).norm());
      const auto r = extend_positions(anchors, radii);
      if (r.kind != ExtensionKind::Pair) continue;
      for (const auto& z : r.points) CHECK(sphere_residual(z, anchors, radii) <= 1e-9);
      const auto h = hyperplane_through(anchors);
      CHECK((reflect(h, r.points[0]) - r.points[1]).norm() <= 1e-9);
    }
  }

  TEST_CASE("the eliminated coordinates do not change the roots") {
    Gen gen(5150);
    int compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const int k = gen.integer(2, 4);
      const auto anchors = gen.anchors(k);
      const Point target = gen.point(k);
      std::vector<double> radii;
      for (const auto& a : anchors) radii.push_back((target - a).norm());
      const auto base = extend_positions(anchors, radii);
      if (base.kind != ExtensionKind::Pair) continue;
      for (int free = 0; free < k; ++free) {
        ExtensionOptions opts;
        opts.free_coordinate = free;
        ExtensionResult alt;
        try {
          alt = extend_positions(anchors, radii, opts);
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::SingularPivot);
          continue;
        }
        // Ill-conditioned blocks amplify rounding; only compare usable ones.
        if (alt.kind != ExtensionKind::Pair) continue;
        for (const auto& z : alt.points) {
          const double d = std::min((z - base.points[0]).norm(), (z - base.points[1]).norm());
          CHECK(d <= 1e-9);
        }
        ++compared;
      }
    }
    CHECK(compared > 300);
  }

  TEST_CASE("one dimension: two points on a line") {
    const std::vector<Point> anchors{pt({2.0})};
    const auto r = extend_positions(anchors, std::vector<double>{0.5});
    REQUIRE(r.kind == ExtensionKind::Pair);
    CHECK(std::min(r.points[0][0], r.points[1][0]) == doctest::Approx(1.5));
    CHECK(std::max(r.points[0][0], r.points[1][0]) == doctest::Approx(2.5));
  }
}
