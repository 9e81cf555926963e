#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace armafield::detail {

/// Regularized systems with a condition number above this are rejected.
inline constexpr double kSingularLimit = 1e14;

/// sigma_max / sigma_min, +inf for a singular (or empty-spectrum) matrix.
inline double condition_number(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return std::numeric_limits<double>::infinity();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0) || !std::isfinite(smax)) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

}  // namespace armafield::detail
