#include "armafield/ar_yw.hpp"

#include <cmath>
#include <string>

#include "armafield/error.hpp"
#include "linalg.hpp"

namespace armafield {

YwSystem build_yw_system(const LagGrid& lags, int K1, int K2) {
    if (K1 < 0 || K2 < 0 || (K1 == 0 && K2 == 0)) throw InvalidArgument("build_yw_system: empty AR support");
    if (lags.kmax() < K1 || lags.lmax() < K2)
        throw InvalidArgument("build_yw_system: lag window (" + std::to_string(lags.kmax()) + "," +
                              std::to_string(lags.lmax()) + ") does not cover order (" + std::to_string(K1) +
                              "," + std::to_string(K2) + ")");
    YwSystem sys;
    sys.layout = lag_order(K1, K2);
    const auto dim = static_cast<Eigen::Index>(sys.layout.size());
    sys.R.resize(dim, dim);
    sys.r0.resize(dim);
    for (Eigen::Index row = 0; row < dim; ++row) {
        const auto [k, l] = sys.layout[static_cast<std::size_t>(row)];
        sys.r0[row] = lags.at(k, l);
        for (Eigen::Index col = 0; col < dim; ++col) {
            const auto [i, j] = sys.layout[static_cast<std::size_t>(col)];
            sys.R(row, col) = lags.at(k - i, l - j);
        }
    }
    return sys;
}

LinearSolution solve_yw(const Eigen::MatrixXd& R, const Eigen::VectorXd& r0) {
    if (R.rows() != R.cols() || R.rows() != r0.size())
        throw InvalidArgument("solve_yw: expected a square system matching the right-hand side");
    LinearSolution out;
    out.condition = detail::condition_number(R);
    if (out.condition <= kConditionLimit) {
        out.x = -R.colPivHouseholderQr().solve(r0);
        return out;
    }
    const double lambda = kRidgeScale * R.trace() / static_cast<double>(R.rows());
    Eigen::MatrixXd ridged = R;
    ridged.diagonal().array() += lambda;
    if (!(lambda > 0.0) || !(detail::condition_number(ridged) <= detail::kSingularLimit))
        throw EstimationFailure("Yule-Walker system is singular even after ridge regularization");
    out.x = -ridged.colPivHouseholderQr().solve(r0);
    out.regularized = true;
    return out;
}

double noise_variance(const LagGrid& lags, const LagCoefficients& alpha) {
    double sigma2 = lags.at(0, 0);
    const auto lag_list = alpha.lags();
    for (std::size_t k = 0; k < lag_list.size(); ++k)
        sigma2 += alpha.values()[k] * lags.at(-lag_list[k].i, -lag_list[k].j);
    if (!(sigma2 > 0.0))
        throw DegenerateFieldError("degenerate field: Yule-Walker innovation variance is not positive");
    return sigma2;
}

Field filter_residual(const Field& field, const LagCoefficients& alpha) {
    const auto K1 = static_cast<std::size_t>(alpha.max_i());
    const auto K2 = static_cast<std::size_t>(alpha.max_j());
    if (field.rows() <= K1 || field.cols() <= K2)
        throw InvalidArgument("filter_residual: field smaller than the filter support");
    const auto lag_list = alpha.lags();
    const auto a = alpha.values();
    Field out(field.rows() - K1, field.cols() - K2);
    for (std::size_t n = K1; n < field.rows(); ++n) {
        for (std::size_t m = K2; m < field.cols(); ++m) {
            double acc = field(n, m);
            for (std::size_t k = 0; k < lag_list.size(); ++k)
                acc += a[k] * field(n - lag_list[k].i, m - lag_list[k].j);
            out(n - K1, m - K2) = acc;
        }
    }
    return out;
}

ArFit fit_ar(const Field& field, int K1, int K2) {
    const LagGrid lags = estimate_lags(field, K1, K2);
    if (!(lags.at(0, 0) > 0.0)) throw DegenerateFieldError("degenerate field: zero variance");
    const YwSystem sys = build_yw_system(lags, K1, K2);
    const LinearSolution sol = solve_yw(sys.R, sys.r0);
    ArFit fit;
    fit.alpha = LagCoefficients(K1, K2, std::vector<double>(sol.x.data(), sol.x.data() + sol.x.size()));
    fit.regularized = sol.regularized;
    fit.sigma2_hat = noise_variance(lags, fit.alpha);
    fit.residual = filter_residual(field, fit.alpha);
    return fit;
}

}  // namespace armafield
