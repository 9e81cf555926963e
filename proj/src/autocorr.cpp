#include "armafield/autocorr.hpp"

#include <cstdlib>
#include <string>

#include "armafield/error.hpp"

namespace armafield {

LagGrid::LagGrid(int kmax, int lmax) : kmax_(kmax), lmax_(lmax) {
    if (kmax < 0 || lmax < 0) throw InvalidArgument("LagGrid: negative lag bound");
    values_.assign(static_cast<std::size_t>(kmax + 1) * static_cast<std::size_t>(2 * lmax + 1), 0.0);
}

std::size_t LagGrid::slot(int k, int l) const {
    if (std::abs(k) > kmax_ || std::abs(l) > lmax_)
        throw InvalidArgument("LagGrid: lag (" + std::to_string(k) + "," + std::to_string(l) +
                              ") outside window");
    if (k < 0 || (k == 0 && l < 0)) {
        k = -k;
        l = -l;
    }
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(2 * lmax_ + 1) +
           static_cast<std::size_t>(l + lmax_);
}

double LagGrid::at(int k, int l) const { return values_[slot(k, l)]; }

void LagGrid::set(int k, int l, double value) { values_[slot(k, l)] = value; }

LagGrid LagGrid::scaled(double factor) const {
    LagGrid out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
}

LagGrid estimate_lags(const Field& field, int kmax, int lmax) {
    if (kmax < 0 || lmax < 0) throw InvalidArgument("estimate_lags: negative lag bound");
    const std::size_t rows = field.rows();
    const std::size_t cols = field.cols();
    if (static_cast<std::size_t>(kmax) >= rows || static_cast<std::size_t>(lmax) >= cols)
        throw InvalidArgument("estimate_lags: lag bounds (" + std::to_string(kmax) + "," + std::to_string(lmax) +
                              ") exceed field size " + std::to_string(rows) + "x" + std::to_string(cols));
    LagGrid grid(kmax, lmax);
    for (int k = 0; k <= kmax; ++k) {
        const std::size_t nr = rows - static_cast<std::size_t>(k);
        for (int l = 0; l <= lmax; ++l) {
            const std::size_t nc = cols - static_cast<std::size_t>(l);
            const double norm = static_cast<double>(nr) * static_cast<double>(nc);
            double same = 0.0;
            double cross = 0.0;
            for (std::size_t i = 0; i < nr; ++i) {
                const double* top = &field.values()[i * cols];
                const double* bottom = &field.values()[(i + k) * cols];
                for (std::size_t j = 0; j < nc; ++j) {
                    same += top[j] * bottom[j + l];
                    cross += top[j + l] * bottom[j];
                }
            }
            grid.set(k, l, same / norm);
            if (k >= 1 && l >= 1) grid.set(k, -l, cross / norm);
        }
    }
    return grid;
}

}  // namespace armafield
