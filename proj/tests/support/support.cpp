#include "support.hpp"

#include <algorithm>

namespace dmdgp::test {

std::vector<Point> newton_intersections(const std::vector<Point>& anchors,
                                        const std::vector<double>& radii, int starts,
                                        std::uint64_t seed) {
  const int k = static_cast<int>(anchors.size());
  Gen gen(seed);
  std::vector<Point> roots;
  for (int s = 0; s < starts; ++s) {
    Point z = gen.point(k, -3.0, 3.0);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd f(k);
      Eigen::MatrixXd jac(k, k);
      for (int j = 0; j < k; ++j) {
        const Eigen::VectorXd diff = z - anchors[j];
        f[j] = diff.squaredNorm() - radii[j] * radii[j];
        jac.row(j) = 2.0 * diff.transpose();
      }
      if (f.lpNorm<Eigen::Infinity>() < 1e-14) {
        converged = true;
        break;
      }
      const Eigen::VectorXd step = jac.fullPivLu().solve(f);
      if (!step.allFinite()) break;
      z -= step;
    }
    if (!converged) continue;
    const bool known = std::any_of(roots.begin(), roots.end(),
                                   [&](const Point& r) { return (r - z).norm() < 1e-7; });
    if (!known) roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](const Point& a, const Point& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  });
  return roots;
}

Eigen::MatrixXd squared_distances(const std::vector<Point>& pts) {
  const auto m = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd sq(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) sq(a, b) = (pts[a] - pts[b]).squaredNorm();
  }
  return sq;
}

Instance chain_instance(int k, int n, std::uint64_t seed) {
  return random_instance(k, n, 0.0, seed).instance;
}

}  // namespace dmdgp::test
