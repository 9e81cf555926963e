#pragma once

// Stage 2 of the two-stage estimator: least-squares regression of the field
// on its own lags and on lags of the stage-1 innovation estimate.

#include <Eigen/Dense>

#include "armafield/ar_yw.hpp"
#include "armafield/field.hpp"

namespace armafield {

struct Regression {
    Eigen::MatrixXd Phi;
    Eigen::VectorXd x;
    /// Field coordinates of the first regression row; rows advance m fastest.
    std::size_t first_row = 0;
    std::size_t first_col = 0;
    std::size_t scan_rows = 0;
    std::size_t scan_cols = 0;
};

/// One regression row per (n,m), n in [L+1, N1-1], m in [M+1, N2-1]
/// (L = K1+q1, M = K2+q2), scanned row-major. The row holds x[n-i,m-j] for
/// (i,j) in lag_order(p1,p2) followed by -w[n-i,m-j] for (i,j) in
/// lag_order(q1,q2). `noise` is the stage-1 residual, whose (0,0) entry sits
/// at field coordinate (K1,K2).
Regression build_phi(const Field& field, const Field& noise, const ModelOrder& order);

/// theta = -(Phi^t Phi)^{-1} Phi^t x, computed from a Householder QR of Phi.
/// When cond(Phi^t Phi) > 1e10 the ridge lambda = 1e-8 trace(Phi^t Phi)/dim
/// is added and the result flagged as regularized.
LinearSolution solve_theta(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& x);

struct ArmaFit {
    ModelOrder order;
    ArmaParams params;  // params.sigma2 == sigma2_hat
    Eigen::VectorXd theta;
    std::size_t regression_rows = 0;
    bool regularized = false;  // either stage needed the ridge fallback
    double sigma2_hat = 0.0;   // variance of the final ARMA residual
    ArFit stage1;
    /// Final residual x + Phi theta on the regression region, whose (0,0)
    /// entry sits at field coordinate (L+1, M+1).
    Field residual;
};

/// Smallest field side lengths accepted by estimate() for `order`.
std::size_t min_estimation_rows(const ModelOrder& order);
std::size_t min_estimation_cols(const ModelOrder& order);

/// Two-stage Yule-Walker least-squares estimate on a zero-mean field.
ArmaFit estimate(const Field& field, const ModelOrder& order);

}  // namespace armafield
