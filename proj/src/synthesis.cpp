#include "armafield/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "armafield/error.hpp"
#include "armafield/random.hpp"

namespace armafield {

namespace {

void check_params_match(const ModelOrder& order, const ArmaParams& params) {
    if (params.a.max_i() != order.p1 || params.a.max_j() != order.p2 || params.b.max_i() != order.q1 ||
        params.b.max_j() != order.q2)
        throw InvalidArgument("synthesis: parameters do not match model order");
}

// Returns false when the recursion left the representable range.
bool run_recursion(const Field& noise, const ArmaParams& params, Field& out) {
    const auto a_lags = params.a.lags();
    const auto b_lags = params.b.lags();
    const auto a = params.a.values();
    const auto b = params.b.values();
    const std::size_t rows = noise.rows();
    const std::size_t cols = noise.cols();
    out = Field(rows, cols);
    for (std::size_t n = 0; n < rows; ++n) {
        for (std::size_t m = 0; m < cols; ++m) {
            double acc = noise(n, m);
            for (std::size_t k = 0; k < a_lags.size(); ++k) {
                const auto [i, j] = a_lags[k];
                if (n >= static_cast<std::size_t>(i) && m >= static_cast<std::size_t>(j))
                    acc -= a[k] * out(n - i, m - j);
            }
            for (std::size_t k = 0; k < b_lags.size(); ++k) {
                const auto [i, j] = b_lags[k];
                if (n >= static_cast<std::size_t>(i) && m >= static_cast<std::size_t>(j))
                    acc += b[k] * noise(n - i, m - j);
            }
            if (!(std::abs(acc) <= kOverflowGuard)) return false;
            out(n, m) = acc;
        }
    }
    return true;
}

}  // namespace

Field innovations(const SynthesisConfig& config) {
    if (!(config.params.sigma2 > 0.0) || !std::isfinite(config.params.sigma2))
        throw InvalidArgument("synthesis: sigma2 must be positive");
    const std::size_t rows = config.rows + config.burn_in;
    const std::size_t cols = config.cols + config.burn_in;
    const double sd = std::sqrt(config.params.sigma2);
    RandomStream rng(config.seed);
    std::vector<double> w(rows * cols);
    for (double& v : w) v = sd * rng.gaussian();
    return Field(rows, cols, std::move(w));
}

Field arma_recursion(const Field& noise, const ArmaParams& params) {
    Field out;
    if (!run_recursion(noise, params, out))
        throw InstabilityError("unstable parameters: synthesized field exceeded magnitude 1e12");
    return out;
}

Field synthesize(const SynthesisConfig& config) {
    config.order.validate();
    check_params_match(config.order, config.params);
    if (config.rows == 0 || config.cols == 0) throw InvalidArgument("synthesis: empty output size");
    const auto& o = config.order;
    if (config.burn_in < static_cast<std::size_t>(std::max({o.p1, o.p2, o.q1, o.q2})))
        throw InvalidArgument("synthesis: burn_in must be >= max(p1,p2,q1,q2)");
    const Field full = arma_recursion(innovations(config), config.params);
    return full.crop(config.burn_in, config.burn_in, config.rows, config.cols);
}

bool stability_check(const ModelOrder& order, const ArmaParams& params) {
    check_params_match(order, params);
    constexpr std::size_t kGrid = 64;
    constexpr std::size_t kLead = 32;
    Field impulse(kGrid, kGrid);
    impulse(0, 0) = 1.0;
    const ArmaParams ar_only{params.a, LagCoefficients(order.q1, order.q2), 1.0};
    Field response;
    if (!run_recursion(impulse, ar_only, response)) return false;
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t n = 0; n < kGrid; ++n) {
        for (std::size_t m = 0; m < kGrid; ++m) {
            const double e = response(n, m) * response(n, m);
            total += e;
            if (n >= kLead || m >= kLead) tail += e;
        }
    }
    if (!std::isfinite(total)) return false;
    return tail < 1e-6 * total;
}

}  // namespace armafield
