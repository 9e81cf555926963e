#pragma once

#include <vector>

#include "armafield/field.hpp"

namespace armafield {

/// Sample autocorrelation r[k,l] for |k| <= kmax, |l| <= lmax.
///
/// Only the half-plane k > 0 (plus k == 0, l >= 0) is stored; the rest is
/// read through the point symmetry r[-k,-l] = r[k,l], so that identity holds
/// exactly.
class LagGrid {
public:
    LagGrid() = default;
    LagGrid(int kmax, int lmax);

    int kmax() const noexcept { return kmax_; }
    int lmax() const noexcept { return lmax_; }

    double at(int k, int l) const;
    /// Stores r[k,l] (and therefore r[-k,-l]).
    void set(int k, int l, double value);

    /// Every stored lag multiplied by `factor`.
    LagGrid scaled(double factor) const;

private:
    std::size_t slot(int k, int l) const;

    int kmax_ = 0;
    int lmax_ = 0;
    std::vector<double> values_;
};

/// Unbiased lag estimator on a zero-mean field:
///   r[k,l]  = 1/((N1-k)(N2-l)) sum x[i,j]   x[i+k,j+l]
///   r[k,-l] = 1/((N1-k)(N2-l)) sum x[i,j+l] x[i+k,j]     (k,l >= 1)
/// with the sums over every in-range (i,j). Requires kmax < N1, lmax < N2.
LagGrid estimate_lags(const Field& field, int kmax, int lmax);

}  // namespace armafield
