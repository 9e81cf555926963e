#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "armafield/autocorr.hpp"
#include "armafield/error.hpp"
#include "armafield/imaging_io.hpp"
#include "armafield/segmenter.hpp"
#include "armafield/synthesis.hpp"
#include "armafield/ywls.hpp"

namespace py = pybind11;
using namespace armafield;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field_2d(const DoubleArray& a) {
    if (a.ndim() != 2) throw InvalidArgument("expected a 2D array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return Field(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

DoubleArray to_numpy(const Field& f) {
    DoubleArray out({f.rows(), f.cols()});
    std::memcpy(out.mutable_data(), f.values().data(), f.size() * sizeof(double));
    return out;
}

template <class T>
py::array_t<T> grid_array(const std::vector<T>& v, std::size_t rows, std::size_t cols) {
    py::array_t<T> out({rows, cols});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

DoubleArray vector_array(const Eigen::VectorXd& v) {
    DoubleArray out(v.size());
    std::copy(v.data(), v.data() + v.size(), out.mutable_data());
    return out;
}

py::dict coefficients_dict(const LagCoefficients& c) {
    py::dict d;
    for (const Lag& l : c.lags()) d[py::make_tuple(l.i, l.j)] = c.at(l.i, l.j);
    return d;
}

ArmaParams params_from_theta(const ModelOrder& order, const std::vector<double>& theta, double sigma2) {
    Eigen::VectorXd t(static_cast<Eigen::Index>(theta.size()));
    for (std::size_t k = 0; k < theta.size(); ++k) t[static_cast<Eigen::Index>(k)] = theta[k];
    return theta_unpack(t, order, sigma2);
}

}  // namespace

PYBIND11_MODULE(_armafield, m) {
    m.doc() = "2D ARMA random-field synthesis, two-stage estimation and block-wise texture segmentation";

    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<DegenerateFieldError>(m, "DegenerateFieldError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvalidArgument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const IoError& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        }
    });

    py::class_<ModelOrder>(m, "ModelOrder")
        .def(py::init([](int p1, int p2, int q1, int q2, int K1, int K2) {
                 ModelOrder o{p1, p2, q1, q2, K1, K2};
                 if (K1 <= 0 || K2 <= 0) o = ModelOrder::with_default_ar(p1, p2, q1, q2);
                 o.validate();
                 return o;
             }),
             py::arg("p1"), py::arg("p2"), py::arg("q1"), py::arg("q2"), py::arg("K1") = 0, py::arg("K2") = 0,
             "Quarter-plane ARMA order; K1/K2 <= 0 picks the default long-AR order.")
        .def_readonly("p1", &ModelOrder::p1)
        .def_readonly("p2", &ModelOrder::p2)
        .def_readonly("q1", &ModelOrder::q1)
        .def_readonly("q2", &ModelOrder::q2)
        .def_readonly("K1", &ModelOrder::K1)
        .def_readonly("K2", &ModelOrder::K2)
        .def_property_readonly("theta_size", &ModelOrder::theta_size)
        .def("__repr__", [](const ModelOrder& o) {
            return "ModelOrder(" + std::to_string(o.p1) + ", " + std::to_string(o.p2) + ", " + std::to_string(o.q1) +
                   ", " + std::to_string(o.q2) + ", K1=" + std::to_string(o.K1) + ", K2=" + std::to_string(o.K2) + ")";
        });

    m.def("default_block_order", &default_block_order);

    m.def(
        "lag_order",
        [](int p1, int p2) {
            std::vector<std::pair<int, int>> out;
            for (const Lag& l : lag_order(p1, p2)) out.emplace_back(l.i, l.j);
            return out;
        },
        py::arg("p1"), py::arg("p2"), "Lags (i, j) of the box [0..p1]x[0..p2] without (0, 0), row-major.");

    m.def(
        "zero_mean",
        [](const DoubleArray& a) {
            const CenteredField c = zero_mean(to_field_2d(a));
            return py::make_tuple(to_numpy(c.field), c.mean);
        },
        py::arg("field"));

    m.def(
        "synthesize",
        [](const ModelOrder& order, const std::vector<double>& theta, double sigma2, std::size_t rows, std::size_t cols,
           std::size_t burn_in, std::uint64_t seed) {
            SynthesisConfig c;
            c.order = order;
            c.params = params_from_theta(order, theta, sigma2);
            c.rows = rows;
            c.cols = cols;
            c.burn_in = burn_in;
            c.seed = seed;
            Field f;
            {
                py::gil_scoped_release release;
                f = synthesize(c);
            }
            return to_numpy(f);
        },
        py::arg("order"), py::arg("theta"), py::arg("sigma2") = 1.0, py::arg("rows") = 256, py::arg("cols") = 256,
        py::arg("burn_in") = 64, py::arg("seed") = 0,
        "ARMA field driven by seeded Gaussian innovations; theta = [a in lag order, b in lag order].");

    m.def(
        "stability_check",
        [](const ModelOrder& order, const std::vector<double>& theta) {
            return stability_check(order, params_from_theta(order, theta, 1.0));
        },
        py::arg("order"), py::arg("theta"));

    m.def(
        "estimate_lags",
        [](const DoubleArray& a, int kmax, int lmax) {
            const LagGrid g = estimate_lags(to_field_2d(a), kmax, lmax);
            DoubleArray out({2 * kmax + 1, 2 * lmax + 1});
            auto v = out.mutable_unchecked<2>();
            for (int k = -kmax; k <= kmax; ++k)
                for (int l = -lmax; l <= lmax; ++l) v(k + kmax, l + lmax) = g.at(k, l);
            return out;
        },
        py::arg("field"), py::arg("kmax"), py::arg("lmax"), "r[k, l] stored at [k + kmax, l + lmax].");

    m.def(
        "estimate",
        [](const DoubleArray& a, const ModelOrder& order) {
            const Field f = to_field_2d(a);
            ArmaFit fit;
            {
                py::gil_scoped_release release;
                fit = estimate(f, order);
            }
            py::dict d;
            d["theta"] = vector_array(fit.theta);
            d["a"] = coefficients_dict(fit.params.a);
            d["b"] = coefficients_dict(fit.params.b);
            d["sigma2"] = fit.sigma2_hat;
            d["regularized"] = fit.regularized;
            d["regression_rows"] = fit.regression_rows;
            d["residual"] = to_numpy(fit.residual);
            return d;
        },
        py::arg("field"), py::arg("order"), "Two-stage Yule-Walker least-squares fit of a zero-mean field.");

    m.def(
        "segment",
        [](const DoubleArray& image, int classes, std::size_t block_size, std::uint64_t seed,
           std::optional<ModelOrder> order, std::size_t stride, bool include_log_sigma2, unsigned threads) {
            const Field f = to_field_2d(image);
            FeatureOptions opt;
            opt.block_size = block_size;
            opt.stride = stride;
            opt.include_log_sigma2 = include_log_sigma2;
            opt.threads = threads;
            BlockFeatures features;
            SegmentationMap map;
            {
                py::gil_scoped_release release;
                features = extract_features(f, order.value_or(default_block_order()), opt);
                map = kmeans(features, classes, seed);
            }
            Eigen::MatrixXd centroids = map.centroids;
            DoubleArray cent({centroids.rows(), centroids.cols()});
            for (Eigen::Index i = 0; i < centroids.rows(); ++i)
                for (Eigen::Index j = 0; j < centroids.cols(); ++j) cent.mutable_at(i, j) = centroids(i, j);
            std::vector<std::uint8_t> valid = features.valid;
            py::dict d;
            d["block_labels"] = grid_array(map.block_labels, map.grid_h, map.grid_w);
            d["pixel_labels"] = grid_array(map.pixel_labels, map.image_rows, map.image_cols);
            d["valid"] = grid_array(valid, map.grid_h, map.grid_w);
            d["centroids"] = cent;
            d["inertia"] = map.inertia;
            d["iterations"] = map.iterations;
            d["inertia_history"] = map.inertia_history;
            return d;
        },
        py::arg("image"), py::arg("classes") = 3, py::arg("block_size") = 16, py::arg("seed") = 0,
        py::arg("order") = py::none(), py::arg("stride") = 0, py::arg("include_log_sigma2") = true,
        py::arg("threads") = 1, "Block-wise ARMA features clustered by k-means; invalid blocks carry label `classes`.");

    m.def(
        "label_accuracy",
        [](const std::vector<int>& predicted, const std::vector<int>& truth, int classes) {
            const AccuracyReport r = label_accuracy(predicted, truth, classes);
            py::dict d;
            d["accuracy"] = r.accuracy;
            d["permutation"] = r.permutation;
            d["confusion_matrix"] = r.confusion;
            d["evaluated"] = r.evaluated;
            return d;
        },
        py::arg("predicted"), py::arg("truth"), py::arg("classes"));

    m.def(
        "read_pgm",
        [](const std::string& path) {
            const GrayImage img = read_pgm_file(path);
            return py::make_tuple(grid_array(img.samples, img.height, img.width), img.maxval);
        },
        py::arg("path"), "Returns (samples as a uint16 array, maxval).");

    m.def(
        "write_pgm",
        [](const std::string& path, const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& a,
           int maxval) {
            if (a.ndim() != 2) throw InvalidArgument("expected a 2D array");
            GrayImage img;
            img.height = static_cast<std::size_t>(a.shape(0));
            img.width = static_cast<std::size_t>(a.shape(1));
            img.maxval = maxval;
            img.samples.assign(a.data(), a.data() + img.width * img.height);
            write_pgm_file(path, img);
        },
        py::arg("path"), py::arg("samples"), py::arg("maxval") = 255);
}
