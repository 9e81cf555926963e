#include "armafield/ywls.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <string>

#include "armafield/error.hpp"
#include "linalg.hpp"

namespace armafield {

Regression build_phi(const Field& field, const Field& noise, const ModelOrder& order) {
    order.validate();
    const auto L = static_cast<std::size_t>(order.margin_rows());
    const auto M = static_cast<std::size_t>(order.margin_cols());
    const auto K1 = static_cast<std::size_t>(order.K1);
    const auto K2 = static_cast<std::size_t>(order.K2);
    if (L + 1 >= field.rows() || M + 1 >= field.cols())
        throw InvalidArgument("build_phi: field " + std::to_string(field.rows()) + "x" +
                              std::to_string(field.cols()) + " too small for margins L=" + std::to_string(L) +
                              ", M=" + std::to_string(M));
    if (noise.rows() + K1 != field.rows() || noise.cols() + K2 != field.cols())
        throw InvalidArgument("build_phi: noise field is not aligned with the (K1,K2) filtering region");

    const auto ar = lag_order(order.p1, order.p2);
    const auto ma = lag_order(order.q1, order.q2);
    Regression reg;
    reg.first_row = L + 1;
    reg.first_col = M + 1;
    reg.scan_rows = field.rows() - L - 1;
    reg.scan_cols = field.cols() - M - 1;
    const auto rows = static_cast<Eigen::Index>(reg.scan_rows * reg.scan_cols);
    const auto cols = static_cast<Eigen::Index>(ar.size() + ma.size());
    reg.Phi.resize(rows, cols);
    reg.x.resize(rows);

    Eigen::Index row = 0;
    for (std::size_t n = L + 1; n < field.rows(); ++n) {
        for (std::size_t m = M + 1; m < field.cols(); ++m, ++row) {
            Eigen::Index col = 0;
            for (const auto [i, j] : ar) reg.Phi(row, col++) = field(n - i, m - j);
            for (const auto [i, j] : ma) reg.Phi(row, col++) = -noise(n - i - K1, m - j - K2);
            reg.x[row] = field(n, m);
        }
    }
    return reg;
}

LinearSolution solve_theta(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& x) {
    if (Phi.rows() != x.size()) throw InvalidArgument("solve_theta: Phi and x disagree in row count");
    if (Phi.cols() == 0) throw InvalidArgument("solve_theta: no unknowns");
    if (Phi.rows() < Phi.cols())
        throw InvalidArgument("solve_theta: need at least as many rows (" + std::to_string(Phi.rows()) +
                              ") as unknowns (" + std::to_string(Phi.cols()) + ")");
    LinearSolution out;
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Phi);
    const Eigen::Index dim = Phi.cols();
    const Eigen::MatrixXd r = qr.matrixQR().topRows(dim).triangularView<Eigen::Upper>();
    const double cond_r = detail::condition_number(r);
    out.condition = cond_r * cond_r;
    if (out.condition <= kConditionLimit) {
        out.x = -qr.solve(x);
        return out;
    }
    // Ridge via the augmented system [Phi; sqrt(lambda) I] theta ~ -[x; 0].
    const double lambda = kRidgeScale * Phi.squaredNorm() / static_cast<double>(dim);
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw EstimationFailure("least-squares system is rank deficient even after ridge regularization");
    Eigen::MatrixXd augmented(Phi.rows() + dim, dim);
    augmented.topRows(Phi.rows()) = Phi;
    augmented.bottomRows(dim) = std::sqrt(lambda) * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(Phi.rows() + dim);
    rhs.head(Phi.rows()) = x;
    const Eigen::HouseholderQR<Eigen::MatrixXd> ridged(augmented);
    const Eigen::MatrixXd rr = ridged.matrixQR().topRows(dim).triangularView<Eigen::Upper>();
    const double cond_rr = detail::condition_number(rr);
    if (!(cond_rr * cond_rr <= detail::kSingularLimit))
        throw EstimationFailure("least-squares system is rank deficient even after ridge regularization");
    out.x = -ridged.solve(rhs);
    out.regularized = true;
    return out;
}

std::size_t min_estimation_rows(const ModelOrder& order) {
    return static_cast<std::size_t>(order.K1 + order.q1 + order.p1 + 2);
}

std::size_t min_estimation_cols(const ModelOrder& order) {
    return static_cast<std::size_t>(order.K2 + order.q2 + order.p2 + 2);
}

ArmaFit estimate(const Field& field, const ModelOrder& order) {
    order.validate_for_estimation();
    if (field.rows() < min_estimation_rows(order) || field.cols() < min_estimation_cols(order))
        throw InvalidArgument("estimate: field " + std::to_string(field.rows()) + "x" +
                              std::to_string(field.cols()) + " is below the minimum " +
                              std::to_string(min_estimation_rows(order)) + "x" +
                              std::to_string(min_estimation_cols(order)) + " for this order");
    const double peak = std::transform_reduce(field.values().begin(), field.values().end(), 0.0,
                                              [](double a, double b) { return std::max(a, b); },
                                              [](double v) { return std::abs(v); });
    if (peak == 0.0) throw DegenerateFieldError("degenerate field: all values are zero after mean removal");

    ArmaFit fit;
    fit.order = order;
    fit.stage1 = fit_ar(field, order.K1, order.K2);
    const Regression reg = build_phi(field, fit.stage1.residual, order);
    if (reg.Phi.rows() < reg.Phi.cols())
        throw InvalidArgument("estimate: fewer regression rows than unknowns");
    const LinearSolution sol = solve_theta(reg.Phi, reg.x);

    fit.theta = sol.x;
    fit.regression_rows = static_cast<std::size_t>(reg.Phi.rows());
    fit.regularized = sol.regularized || fit.stage1.regularized;

    const Eigen::VectorXd e = reg.x + reg.Phi * fit.theta;
    fit.residual = Field(reg.scan_rows, reg.scan_cols, std::vector<double>(e.data(), e.data() + e.size()));
    fit.sigma2_hat = sample_variance(fit.residual.values());
    if (!(fit.sigma2_hat > 0.0)) throw DegenerateFieldError("degenerate field: ARMA residual variance is zero");
    fit.params = theta_unpack(fit.theta, order, fit.sigma2_hat);
    return fit;
}

}  // namespace armafield
