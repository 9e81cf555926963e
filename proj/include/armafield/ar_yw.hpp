#pragma once

// Stage 1 of the two-stage estimator: a long quarter-plane AR(K1,K2) fit by
// the 2D Yule-Walker equations, used to estimate the innovation field.

#include <vector>

#include <Eigen/Dense>

#include "armafield/autocorr.hpp"
#include "armafield/field.hpp"

namespace armafield {

/// Condition numbers above this trigger the ridge fallback.
inline constexpr double kConditionLimit = 1e10;
/// Ridge weight relative to trace(matrix)/dim.
inline constexpr double kRidgeScale = 1e-8;

struct YwSystem {
    Eigen::MatrixXd R;   // R(row (k,l), col (i,j)) = r[k-i, l-j]
    Eigen::VectorXd r0;  // r0(row (k,l)) = r[k,l]
    std::vector<Lag> layout;  // lag_order(K1,K2); indexes rows and unknowns
};

/// One equation per (k,l) in [0..K1]x[0..K2] \ {(0,0)}:
///   sum_{(i,j)} alpha_ij r[k-i, l-j] = -r[k,l].
/// Needs lags.kmax() >= K1 and lags.lmax() >= K2.
YwSystem build_yw_system(const LagGrid& lags, int K1, int K2);

struct LinearSolution {
    Eigen::VectorXd x;
    bool regularized = false;
    /// 2-norm condition number of the matrix actually solved before any ridge.
    double condition = 0.0;
};

/// Solves R alpha = -r0. Falls back to R + lambda I with
/// lambda = 1e-8 trace(R)/dim when cond(R) > 1e10; throws EstimationFailure
/// if that is still singular.
LinearSolution solve_yw(const Eigen::MatrixXd& R, const Eigen::VectorXd& r0);

/// sigma2 = r[0,0] + sum alpha_ij r[-i,-j]. Throws DegenerateFieldError when
/// the result is not positive.
double noise_variance(const LagGrid& lags, const LagCoefficients& alpha);

/// w[n,m] = x[n,m] + sum alpha_ij x[n-i,m-j] on n >= K1, m >= K2.
/// Output is (N1-K1)x(N2-K2); entry (0,0) corresponds to field (K1,K2).
Field filter_residual(const Field& field, const LagCoefficients& alpha);

struct ArFit {
    LagCoefficients alpha;
    double sigma2_hat = 0.0;
    Field residual;
    bool regularized = false;
};

/// Full stage 1 on a zero-mean field.
ArFit fit_ar(const Field& field, int K1, int K2);

}  // namespace armafield
