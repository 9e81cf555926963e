#pragma once

#include <cstdint>

#include "armafield/field.hpp"

namespace armafield {

struct SynthesisConfig {
    ModelOrder order;
    ArmaParams params;
    std::size_t rows = 256;
    std::size_t cols = 256;
    /// Rows and columns discarded at the top/left to drop the transient of
    /// the zero initial conditions. Must be >= max(p1,p2,q1,q2).
    std::size_t burn_in = 64;
    std::uint64_t seed = 0;
};

/// Magnitude beyond which the recursion is declared unstable.
inline constexpr double kOverflowGuard = 1e12;

/// Gaussian(0, sigma2) innovations over the full (rows+burn_in) x
/// (cols+burn_in) grid, drawn row-major from RandomStream(seed).
Field innovations(const SynthesisConfig& config);

/// Runs the causal ARMA recursion
///   x[n,m] = w[n,m] - sum a_ij x[n-i,m-j] + sum b_ij w[n-i,m-j]
/// on the burn-in-extended grid with zero initial conditions and returns the
/// trailing rows x cols window. Throws InstabilityError if |x| exceeds
/// kOverflowGuard.
Field synthesize(const SynthesisConfig& config);

/// Same recursion, driven by caller-supplied innovations covering the whole
/// extended grid. Returns the full extended grid.
Field arma_recursion(const Field& noise, const ArmaParams& params);

/// True when the impulse response of 1/A on a 64x64 grid keeps all but 1e-6
/// of its energy inside the leading 32x32 quadrant.
bool stability_check(const ModelOrder& order, const ArmaParams& params);

}  // namespace armafield
