#include "armafield/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "armafield/error.hpp"

namespace armafield {

std::vector<Lag> lag_order(int p1, int p2) {
    if (p1 < 0 || p2 < 0) throw InvalidArgument("lag_order: negative order");
    std::vector<Lag> lags;
    lags.reserve(lag_count(p1, p2));
    for (int i = 0; i <= p1; ++i)
        for (int j = 0; j <= p2; ++j)
            if (i != 0 || j != 0) lags.push_back({i, j});
    return lags;
}

Field::Field(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw InvalidArgument("Field: non-finite fill value");
}

Field::Field(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols)
        throw InvalidArgument("Field: expected " + std::to_string(rows * cols) + " values, got " +
                              std::to_string(values_.size()));
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
        throw InvalidArgument("Field: non-finite value");
}

Field Field::crop(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const {
    if (row0 + rows > rows_ || col0 + cols > cols_) throw InvalidArgument("Field::crop: out of bounds");
    Field out(rows, cols);
    for (std::size_t n = 0; n < rows; ++n)
        std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>((row0 + n) * cols_ + col0), cols,
                    out.values_.begin() + static_cast<std::ptrdiff_t>(n * cols));
    return out;
}

ModelOrder ModelOrder::with_default_ar(int p1, int p2, int q1, int q2) {
    const int k = 2 * std::max(p1 + q1, p2 + q2) + 2;
    return {p1, p2, q1, q2, k, k};
}

void ModelOrder::validate() const {
    if (p1 < 0 || p2 < 0 || q1 < 0 || q2 < 0) throw InvalidArgument("model order: negative ARMA order");
    if (K1 <= std::max(p1, q1) || K2 <= std::max(p2, q2))
        throw InvalidArgument("model order: need K1 > max(p1,q1) and K2 > max(p2,q2)");
}

void ModelOrder::validate_for_estimation() const {
    validate();
    if (p1 == 0 && p2 == 0 && q1 == 0 && q2 == 0)
        throw InvalidArgument("model order: (p1,p2,q1,q2) are all zero");
}

LagCoefficients::LagCoefficients(int max_i, int max_j)
    : max_i_(max_i), max_j_(max_j) {
    if (max_i < 0 || max_j < 0) throw InvalidArgument("LagCoefficients: negative order");
    values_.assign(lag_count(max_i, max_j), 0.0);
}

LagCoefficients::LagCoefficients(int max_i, int max_j, std::vector<double> values)
    : LagCoefficients(max_i, max_j) {
    if (values.size() != values_.size())
        throw InvalidArgument("LagCoefficients: expected " + std::to_string(values_.size()) +
                              " coefficients, got " + std::to_string(values.size()));
    values_ = std::move(values);
}

std::size_t LagCoefficients::index(int i, int j) const {
    if (i < 0 || j < 0 || i > max_i_ || j > max_j_ || (i == 0 && j == 0))
        throw InvalidArgument("LagCoefficients: lag (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside support");
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(max_j_ + 1) + static_cast<std::size_t>(j) - 1;
}

bool LagCoefficients::all_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

ArmaParams ArmaParams::zeros(const ModelOrder& order, double sigma2) {
    return {LagCoefficients(order.p1, order.p2), LagCoefficients(order.q1, order.q2), sigma2};
}

Eigen::VectorXd theta_pack(const ArmaParams& params, const ModelOrder& order) {
    if (params.a.max_i() != order.p1 || params.a.max_j() != order.p2 || params.b.max_i() != order.q1 ||
        params.b.max_j() != order.q2)
        throw InvalidArgument("theta_pack: parameters do not match model order");
    Eigen::VectorXd theta(static_cast<Eigen::Index>(order.theta_size()));
    Eigen::Index k = 0;
    for (double v : params.a.values()) theta[k++] = v;
    for (double v : params.b.values()) theta[k++] = v;
    return theta;
}

ArmaParams theta_unpack(const Eigen::VectorXd& theta, const ModelOrder& order, double sigma2) {
    if (static_cast<std::size_t>(theta.size()) != order.theta_size())
        throw InvalidArgument("theta_unpack: expected " + std::to_string(order.theta_size()) +
                              " entries, got " + std::to_string(theta.size()));
    ArmaParams params = ArmaParams::zeros(order, sigma2);
    Eigen::Index k = 0;
    for (double& v : params.a.values()) v = theta[k++];
    for (double& v : params.b.values()) v = theta[k++];
    return params;
}

CenteredField zero_mean(const Field& field) {
    if (field.empty()) throw InvalidArgument("zero_mean: empty field");
    long double sum = 0.0L;
    for (double v : field.values()) sum += v;
    const double mean = static_cast<double>(sum / static_cast<long double>(field.size()));
    Field out = field;
    for (double& v : out.values()) v -= mean;
    return {std::move(out), mean};
}

double sample_variance(std::span<const double> values) {
    if (values.empty()) return 0.0;
    long double sum = 0.0L;
    for (double v : values) sum += v;
    const long double mean = sum / static_cast<long double>(values.size());
    long double ss = 0.0L;
    for (double v : values) {
        const long double d = v - mean;
        ss += d * d;
    }
    return static_cast<double>(ss / static_cast<long double>(values.size()));
}

}  // namespace armafield
