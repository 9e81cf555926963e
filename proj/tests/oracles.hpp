#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code paths they check.

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "armafield/field.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<long double>>;

/// Gaussian elimination with partial pivoting in long double.
inline std::vector<long double> gauss_solve(Matrix a, std::vector<long double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0L) throw std::runtime_error("oracle: singular system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<long double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Solves the square system R x = -r0.
inline Eigen::VectorXd square_solve(const Eigen::MatrixXd& R, const Eigen::VectorXd& r0) {
    const auto n = static_cast<std::size_t>(R.rows());
    Matrix a(n, std::vector<long double>(n));
    std::vector<long double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        b[i] = -static_cast<long double>(r0[static_cast<Eigen::Index>(i)]);
    }
    const auto x = gauss_solve(a, b);
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out[static_cast<Eigen::Index>(i)] = static_cast<double>(x[i]);
    return out;
}

/// theta = -(Phi^t Phi)^{-1} Phi^t x from explicitly formed normal equations.
inline Eigen::VectorXd normal_equations(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& x) {
    const auto rows = static_cast<std::size_t>(Phi.rows());
    const auto n = static_cast<std::size_t>(Phi.cols());
    Matrix g(n, std::vector<long double>(n, 0.0L));
    std::vector<long double> h(n, 0.0L);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const long double pi = Phi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
            h[i] -= pi * x[static_cast<Eigen::Index>(r)];
            for (std::size_t j = 0; j < n; ++j) g[i][j] += pi * Phi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
        }
    }
    const auto theta = gauss_solve(g, h);
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out[static_cast<Eigen::Index>(i)] = static_cast<double>(theta[i]);
    return out;
}

inline double relative_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
    const double scale = std::max(want.norm(), 1e-300);
    return (got - want).norm() / scale;
}

/// y[t] = rho y[t-1] + u[t] along rows, then along columns, with zero
/// initial conditions: the separable AR with A = (1 - rho z1^-1)(1 - rho z2^-1).
inline armafield::Field separable_ar(const armafield::Field& noise, double rho) {
    armafield::Field along_cols = noise;
    for (std::size_t n = 0; n < noise.rows(); ++n)
        for (std::size_t m = 1; m < noise.cols(); ++m) along_cols(n, m) += rho * along_cols(n, m - 1);
    armafield::Field out = along_cols;
    for (std::size_t n = 1; n < noise.rows(); ++n)
        for (std::size_t m = 0; m < noise.cols(); ++m) out(n, m) += rho * out(n - 1, m);
    return out;
}

/// Direct AR recursion x = w - sum a x with the same summation order as the
/// library (lags in row-major order).
inline armafield::Field pure_ar(const armafield::Field& noise, const armafield::LagCoefficients& a) {
    armafield::Field x(noise.rows(), noise.cols());
    for (std::size_t n = 0; n < noise.rows(); ++n) {
        for (std::size_t m = 0; m < noise.cols(); ++m) {
            double acc = noise(n, m);
            for (int i = 0; i <= a.max_i(); ++i) {
                for (int j = 0; j <= a.max_j(); ++j) {
                    if (i == 0 && j == 0) continue;
                    if (n >= static_cast<std::size_t>(i) && m >= static_cast<std::size_t>(j))
                        acc -= a.at(i, j) * x(n - i, m - j);
                }
            }
            x(n, m) = acc;
        }
    }
    return x;
}

/// Normalized autocorrelation of the separable AR field: rho^|k| rho^|l|.
inline double separable_correlation(double rho, int k, int l) {
    return std::pow(rho, std::abs(k)) * std::pow(rho, std::abs(l));
}

/// Sample variance of a 1D AR(1) path simulated independently.
inline double ar1_variance(double rho, double sigma2) { return sigma2 / (1.0 - rho * rho); }

}  // namespace oracle
