#pragma once

// Core grid and parameter types shared by every stage of the estimator.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace armafield {

/// A quarter-plane lag (i, j): i along rows, j along columns.
struct Lag {
    int i = 0;
    int j = 0;

    friend bool operator==(const Lag&, const Lag&) = default;
};

/// All lags in [0..p1]x[0..p2] except (0,0), row-major:
/// (0,1) ... (0,p2), (1,0), (1,1) ... (p1,p2).
std::vector<Lag> lag_order(int p1, int p2);

/// Number of lags returned by lag_order(p1, p2).
constexpr std::size_t lag_count(int p1, int p2) {
    return static_cast<std::size_t>(p1 + 1) * static_cast<std::size_t>(p2 + 1) - 1;
}

/// Real-valued 2D grid, row-major. Values are always finite.
class Field {
public:
    Field() = default;
    Field(std::size_t rows, std::size_t cols, double fill = 0.0);
    Field(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double operator()(std::size_t n, std::size_t m) const noexcept { return values_[n * cols_ + m]; }
    double& operator()(std::size_t n, std::size_t m) noexcept { return values_[n * cols_ + m]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Copy of the sub-grid starting at (row0, col0).
    Field crop(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const;

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// ARMA(p1,p2,q1,q2) support plus the (K1,K2) order of the long-AR
/// approximation used to estimate the innovations.
struct ModelOrder {
    int p1 = 0;
    int p2 = 0;
    int q1 = 0;
    int q2 = 0;
    int K1 = 2;
    int K2 = 2;

    /// Builds an order with the default long-AR truncation
    /// K = 2*max(p1+q1, p2+q2) + 2 on both axes.
    static ModelOrder with_default_ar(int p1, int p2, int q1, int q2);

    std::size_t ar_count() const { return lag_count(p1, p2); }
    std::size_t ma_count() const { return lag_count(q1, q2); }
    std::size_t theta_size() const { return ar_count() + ma_count(); }

    /// Regression margins L = K1 + q1 and M = K2 + q2.
    int margin_rows() const { return K1 + q1; }
    int margin_cols() const { return K2 + q2; }

    /// Throws InvalidArgument unless orders are non-negative and
    /// K1 > max(p1,q1), K2 > max(p2,q2).
    void validate() const;
    /// validate() plus "at least one of p1,p2,q1,q2 is non-zero".
    void validate_for_estimation() const;

    friend bool operator==(const ModelOrder&, const ModelOrder&) = default;
};

/// Coefficients indexed by the lags of lag_order(rows, cols); the (0,0)
/// coefficient is implicitly 1 and never stored.
class LagCoefficients {
public:
    LagCoefficients() = default;
    LagCoefficients(int max_i, int max_j);
    LagCoefficients(int max_i, int max_j, std::vector<double> values);

    int max_i() const noexcept { return max_i_; }
    int max_j() const noexcept { return max_j_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Position of (i,j) in lag_order layout.
    std::size_t index(int i, int j) const;
    double at(int i, int j) const { return values_[index(i, j)]; }
    void set(int i, int j, double v) { values_[index(i, j)] = v; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    std::vector<Lag> lags() const { return lag_order(max_i_, max_j_); }

    bool all_zero() const noexcept;

    friend bool operator==(const LagCoefficients&, const LagCoefficients&) = default;

private:
    int max_i_ = 0;
    int max_j_ = 0;
    std::vector<double> values_;
};

struct ArmaParams {
    LagCoefficients a;  // AR part, support [0..p1]x[0..p2]
    LagCoefficients b;  // MA part, support [0..q1]x[0..q2]
    double sigma2 = 1.0;

    /// All-zero coefficients for the given order.
    static ArmaParams zeros(const ModelOrder& order, double sigma2 = 1.0);

    friend bool operator==(const ArmaParams&, const ArmaParams&) = default;
};

/// theta = [a in lag order, b in lag order].
Eigen::VectorXd theta_pack(const ArmaParams& params, const ModelOrder& order);
ArmaParams theta_unpack(const Eigen::VectorXd& theta, const ModelOrder& order, double sigma2 = 1.0);

struct CenteredField {
    Field field;
    double mean = 0.0;
};

/// Subtracts the sample mean.
CenteredField zero_mean(const Field& field);

/// Population variance (1/N) of the values.
double sample_variance(std::span<const double> values);

}  // namespace armafield
