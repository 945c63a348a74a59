#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dmdgp/geometry.hpp"
#include "dmdgp/instance.hpp"

namespace dmdgp::test {

// Hand-rolled generators for property tests. Each test seeds its own stream
// so failures replay.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::uint64_t bits() { return rng_(); }

  Point point(int k, double lo = -1.0, double hi = 1.0) {
    Point p(k);
    for (int c = 0; c < k; ++c) p[c] = uniform(lo, hi);
    return p;
  }

  Eigen::VectorXd unit(int k) {
    Eigen::VectorXd v(k);
    do {
      for (int c = 0; c < k; ++c) v[c] = std::normal_distribution<double>()(rng_);
    } while (v.norm() < 1e-3);
    return v.normalized();
  }

  Eigen::MatrixXd rotation(int k) {
    Eigen::MatrixXd m(k, k);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) m(r, c) = std::normal_distribution<double>()(rng_);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  }

  // K anchors whose (K-1)-simplex content is comfortably positive.
  std::vector<Point> anchors(int k) {
    for (;;) {
      std::vector<Point> pts;
      for (int j = 0; j < k; ++j) pts.push_back(point(k));
      if (k == 1 || simplex_volume(pts) > 1e-3) return pts;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Independent sphere-intersection oracle: Newton's method on the K equations
// |z - a_j|^2 = r_j^2 from random starts, roots merged within 1e-7.
std::vector<Point> newton_intersections(const std::vector<Point>& anchors,
                                        const std::vector<double>& radii, int starts,
                                        std::uint64_t seed);

// Squared-distance matrix of a point set.
Eigen::MatrixXd squared_distances(const std::vector<Point>& pts);

// The no-pruning instance built from a random draw (discretization edges only).
Instance chain_instance(int k, int n, std::uint64_t seed);

}  // namespace dmdgp::test
