#pragma once

#include <algorithm>
#include <cmath>

namespace dmdgp {

/// Mixed absolute/relative comparison: |x - y| <= atol + rtol * max(|x|, |y|).
struct Tolerance {
  double atol = 1e-12;
  double rtol = 1e-9;

  double band(double reference) const { return atol + rtol * std::abs(reference); }

  bool close(double x, double y) const {
    return std::abs(x - y) <= atol + rtol * std::max(std::abs(x), std::abs(y));
  }
};

}  // namespace dmdgp
