#include "armafield/segmenter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "armafield/error.hpp"
#include "armafield/random.hpp"

namespace armafield {

std::size_t BlockFeatures::valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

namespace {

std::size_t grid_extent(std::size_t image, std::size_t block, std::size_t stride) {
    return image < block ? 0 : (image - block) / stride + 1;
}

BlockFit fit_block(const Field& image, std::size_t row0, std::size_t col0, std::size_t size, const ModelOrder& order,
                   double variance_floor) {
    BlockFit out;
    out.row0 = row0;
    out.col0 = col0;
    const CenteredField block = zero_mean(image.crop(row0, col0, size, size));
    out.mean = block.mean;
    if (sample_variance(block.field.values()) <= variance_floor) return out;
    try {
        out.fit = estimate(block.field, order);
        out.valid = true;
    } catch (const DegenerateFieldError&) {
    } catch (const NumericError&) {
    }
    return out;
}

}  // namespace

BlockFeatures extract_features(const Field& image, const ModelOrder& order, const FeatureOptions& options) {
    order.validate_for_estimation();
    const std::size_t bs = options.block_size;
    const std::size_t stride = options.stride == 0 ? bs : options.stride;
    if (bs < min_estimation_rows(order) || bs < min_estimation_cols(order))
        throw InvalidArgument("extract_features: block size " + std::to_string(bs) +
                              " is too small for the model order (needs " +
                              std::to_string(std::max(min_estimation_rows(order), min_estimation_cols(order))) +
                              ")");
    const std::size_t L = static_cast<std::size_t>(order.margin_rows());
    const std::size_t M = static_cast<std::size_t>(order.margin_cols());
    if ((bs - L - 1) * (bs - M - 1) < order.theta_size())
        throw InvalidArgument("extract_features: block size leaves fewer regression rows than unknowns");

    BlockFeatures out;
    out.image_rows = image.rows();
    out.image_cols = image.cols();
    out.block_size = bs;
    out.stride = stride;
    out.order = order;
    out.grid_h = grid_extent(image.rows(), bs, stride);
    out.grid_w = grid_extent(image.cols(), bs, stride);
    if (out.grid_h == 0 || out.grid_w == 0) throw InvalidArgument("extract_features: image smaller than one block");
    out.dim = order.theta_size() + (options.include_log_sigma2 ? 1 : 0);

    const double variance_floor = 1e-10 * sample_variance(image.values());
    const std::size_t count = out.block_count();
    out.fits.resize(count);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b = next++; b < count; b = next++)
            out.fits[b] = fit_block(image, (b / out.grid_w) * stride, (b % out.grid_w) * stride, bs, order,
                                    variance_floor);
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(count)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    out.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(out.dim));
    out.valid.assign(count, 0);
    for (std::size_t b = 0; b < count; ++b) {
        const BlockFit& f = out.fits[b];
        if (!f.valid) continue;
        out.valid[b] = 1;
        const auto row = static_cast<Eigen::Index>(b);
        out.features.row(row).head(f.fit.theta.size()) = f.fit.theta.transpose();
        if (options.include_log_sigma2) out.features(row, static_cast<Eigen::Index>(out.dim) - 1) = std::log(f.fit.sigma2_hat);
    }
    return out;
}

namespace {

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index p, const Eigen::MatrixXd& centroids, Eigen::Index c) {
    return (points.row(p) - centroids.row(c)).squaredNorm();
}

Eigen::MatrixXd kmeanspp_seeds(const Eigen::MatrixXd& points, int K, RandomStream& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centroids(K, points.cols());
    std::vector<std::uint8_t> chosen(static_cast<std::size_t>(n), 0);
    auto first = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    centroids.row(0) = points.row(first);
    chosen[static_cast<std::size_t>(first)] = 1;
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (Eigen::Index p = 0; p < n; ++p) d2[static_cast<std::size_t>(p)] = squared_distance(points, p, centroids, 0);

    for (int c = 1; c < K; ++c) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        Eigen::Index pick = -1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double cumulative = 0.0;
            for (Eigen::Index p = 0; p < n; ++p) {
                cumulative += d2[static_cast<std::size_t>(p)];
                if (d2[static_cast<std::size_t>(p)] > 0.0 && cumulative > target) {
                    pick = p;
                    break;
                }
            }
            // Rounding can leave the target just past the last increment.
            if (pick < 0)
                for (Eigen::Index p = n - 1; p >= 0 && pick < 0; --p)
                    if (d2[static_cast<std::size_t>(p)] > 0.0) pick = p;
        } else {
            for (Eigen::Index p = 0; p < n && pick < 0; ++p)
                if (!chosen[static_cast<std::size_t>(p)]) pick = p;
        }
        centroids.row(c) = points.row(pick);
        chosen[static_cast<std::size_t>(pick)] = 1;
        for (Eigen::Index p = 0; p < n; ++p)
            d2[static_cast<std::size_t>(p)] =
                std::min(d2[static_cast<std::size_t>(p)], squared_distance(points, p, centroids, c));
    }
    return centroids;
}

}  // namespace

KMeansResult lloyd_kmeans(const Eigen::MatrixXd& points, int K, std::uint64_t seed, const KMeansOptions& options) {
    const Eigen::Index n = points.rows();
    if (K < 1) throw InvalidArgument("kmeans: K must be positive");
    if (n < K)
        throw InvalidArgument("kmeans: " + std::to_string(n) + " points cannot form " + std::to_string(K) +
                              " clusters");
    RandomStream rng(seed);
    KMeansResult out;
    out.centroids = kmeanspp_seeds(points, K, rng);
    out.labels.assign(static_cast<std::size_t>(n), 0);
    std::vector<double> distance(static_cast<std::size_t>(n));

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        double inertia = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            int best = 0;
            double best_d = squared_distance(points, p, out.centroids, 0);
            for (int c = 1; c < K; ++c) {
                const double d = squared_distance(points, p, out.centroids, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            out.labels[static_cast<std::size_t>(p)] = best;
            distance[static_cast<std::size_t>(p)] = best_d;
            inertia += best_d;
        }
        out.iterations = iter;
        out.inertia = inertia;
        if (!out.inertia_history.empty()) {
            const double previous = out.inertia_history.back();
            if (inertia > previous * (1.0 + 1e-12))
                throw NumericError("kmeans: inertia increased from " + std::to_string(previous) + " to " +
                                   std::to_string(inertia));
            out.inertia_history.push_back(inertia);
            if (previous - inertia <= options.relative_tolerance * previous) break;
        } else {
            out.inertia_history.push_back(inertia);
        }
        if (iter == options.max_iterations) break;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, points.cols());
        std::vector<std::size_t> counts(static_cast<std::size_t>(K), 0);
        for (Eigen::Index p = 0; p < n; ++p) {
            const int c = out.labels[static_cast<std::size_t>(p)];
            sums.row(c) += points.row(p);
            ++counts[static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < K; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                out.centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
                continue;
            }
            const auto far = std::max_element(distance.begin(), distance.end()) - distance.begin();
            out.centroids.row(c) = points.row(far);
            distance[static_cast<std::size_t>(far)] = 0.0;
        }
    }
    return out;
}

std::vector<std::size_t> SegmentationMap::class_counts() const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(K), 0);
    for (int label : block_labels)
        if (label >= 0 && label < K) ++counts[static_cast<std::size_t>(label)];
    return counts;
}

std::vector<int> pixel_labels_from_blocks(std::span<const int> block_labels, std::size_t grid_h, std::size_t grid_w,
                                          std::size_t image_rows, std::size_t image_cols, std::size_t block_size,
                                          std::size_t stride) {
    if (block_labels.size() != grid_h * grid_w) throw InvalidArgument("pixel labels: grid size mismatch");
    // Block g covers [g*stride, g*stride + block_size); the nearest block
    // centre to pixel y is floor((y - (block_size - stride)/2) / stride).
    auto nearest = [&](std::size_t y, std::size_t grid) {
        const double offset = (static_cast<double>(block_size) - static_cast<double>(stride)) / 2.0;
        const double g = std::floor((static_cast<double>(y) - offset) / static_cast<double>(stride));
        return static_cast<std::size_t>(std::clamp(g, 0.0, static_cast<double>(grid - 1)));
    };
    std::vector<int> pixels(image_rows * image_cols);
    for (std::size_t y = 0; y < image_rows; ++y) {
        const std::size_t gy = nearest(y, grid_h);
        for (std::size_t x = 0; x < image_cols; ++x)
            pixels[y * image_cols + x] = block_labels[gy * grid_w + nearest(x, grid_w)];
    }
    return pixels;
}

SegmentationMap kmeans(const BlockFeatures& features, int K, std::uint64_t seed, const KMeansOptions& options) {
    const std::size_t valid = features.valid_count();
    if (K < 1) throw InvalidArgument("kmeans: K must be positive");
    if (valid < static_cast<std::size_t>(K))
        throw DegenerateFieldError("too few valid blocks: " + std::to_string(valid) + " valid, K = " +
                                   std::to_string(K));

    const auto dim = static_cast<Eigen::Index>(features.dim);
    Eigen::MatrixXd points(static_cast<Eigen::Index>(valid), dim);
    std::vector<std::size_t> block_of;
    block_of.reserve(valid);
    for (std::size_t b = 0; b < features.block_count(); ++b) {
        if (!features.valid[b]) continue;
        points.row(static_cast<Eigen::Index>(block_of.size())) = features.features.row(static_cast<Eigen::Index>(b));
        block_of.push_back(b);
    }
    const Eigen::RowVectorXd mean = points.colwise().mean();
    Eigen::RowVectorXd scale = ((points.rowwise() - mean).array().square().colwise().sum() /
                                static_cast<double>(points.rows()))
                                   .sqrt()
                                   .matrix();
    for (Eigen::Index d = 0; d < dim; ++d)
        if (!(scale[d] > 0.0)) scale[d] = 1.0;
    const Eigen::MatrixXd standardized = (points.rowwise() - mean).array().rowwise() / scale.array();

    const KMeansResult result = lloyd_kmeans(standardized, K, seed, options);

    SegmentationMap map;
    map.image_rows = features.image_rows;
    map.image_cols = features.image_cols;
    map.grid_h = features.grid_h;
    map.grid_w = features.grid_w;
    map.block_size = features.block_size;
    map.stride = features.stride;
    map.K = K;
    map.block_labels.assign(features.block_count(), K);
    for (std::size_t v = 0; v < block_of.size(); ++v) map.block_labels[block_of[v]] = result.labels[v];
    map.pixel_labels = pixel_labels_from_blocks(map.block_labels, map.grid_h, map.grid_w, map.image_rows,
                                                map.image_cols, map.block_size, map.stride);
    map.centroids = (result.centroids.array().rowwise() * scale.array()).rowwise() + mean.array();
    map.inertia = result.inertia;
    map.iterations = result.iterations;
    map.inertia_history = result.inertia_history;
    return map;
}

AccuracyReport label_accuracy(std::span<const int> predicted, std::span<const int> truth, int classes) {
    if (predicted.size() != truth.size())
        throw InvalidArgument("label_accuracy: prediction has " + std::to_string(predicted.size()) +
                              " labels, truth has " + std::to_string(truth.size()));
    if (classes < 1 || classes > 8) throw InvalidArgument("label_accuracy: classes must be in [1, 8]");
    const auto n = static_cast<std::size_t>(classes);
    AccuracyReport report;
    report.confusion.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (truth[k] < 0 || truth[k] >= classes)
            throw InvalidArgument("label_accuracy: truth label " + std::to_string(truth[k]) + " out of range");
        if (predicted[k] < 0 || predicted[k] >= classes) continue;
        ++report.confusion[static_cast<std::size_t>(truth[k])][static_cast<std::size_t>(predicted[k])];
        ++report.evaluated;
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    report.permutation = perm;
    do {
        std::size_t agree = 0;
        for (std::size_t p = 0; p < n; ++p) agree += report.confusion[static_cast<std::size_t>(perm[p])][p];
        if (agree > best) {
            best = agree;
            report.permutation = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    report.accuracy = report.evaluated == 0 ? 0.0 : static_cast<double>(best) / static_cast<double>(report.evaluated);
    return report;
}

AccuracyReport label_accuracy(const SegmentationMap& predicted, std::span<const int> truth) {
    return label_accuracy(predicted.block_labels, truth, predicted.K);
}

}  // namespace armafield
