#pragma once

// Block-wise ARMA features and k-means texture segmentation.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "armafield/field.hpp"
#include "armafield/ywls.hpp"

namespace armafield {

/// Default per-block model: MA(1,1) = ARMA(0,0,1,1) with a (4,4) long-AR
/// stage, leaving 10x10 regression rows inside a 16x16 block. A full
/// ARMA(1,1,1,1) is not identifiable on near-white blocks (A and B share a
/// common factor), which scatters those blocks along the a = b ridge.
inline ModelOrder default_block_order() { return {0, 0, 1, 1, 4, 4}; }

struct FeatureOptions {
    std::size_t block_size = 16;
    /// Distance between block origins; 0 means block_size (non-overlapping).
    std::size_t stride = 0;
    bool include_log_sigma2 = true;
    /// Worker threads for the per-block fits (results do not depend on it).
    unsigned threads = 1;
};

struct BlockFit {
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    double mean = 0.0;
    bool valid = false;
    ArmaFit fit;  // meaningful only when valid
};

struct BlockFeatures {
    std::size_t image_rows = 0;
    std::size_t image_cols = 0;
    std::size_t grid_h = 0;
    std::size_t grid_w = 0;
    std::size_t block_size = 16;
    std::size_t stride = 16;
    std::size_t dim = 0;
    ModelOrder order;
    /// Row-major (grid_h*grid_w) x dim; zero rows for invalid blocks.
    Eigen::MatrixXd features;
    std::vector<std::uint8_t> valid;
    std::vector<BlockFit> fits;

    std::size_t block_count() const { return grid_h * grid_w; }
    std::size_t valid_count() const;
};

/// Tiles the image, zero-means each block, and fits it with estimate().
/// Feature = theta (+ log sigma2_hat). Blocks whose variance is at most
/// 1e-10 of the global variance, or whose fit breaks down numerically, are
/// marked invalid.
BlockFeatures extract_features(const Field& image, const ModelOrder& order, const FeatureOptions& options = {});

struct KMeansOptions {
    int max_iterations = 100;
    double relative_tolerance = 1e-6;
};

struct KMeansResult {
    std::vector<int> labels;
    Eigen::MatrixXd centroids;  // K x dim
    double inertia = 0.0;
    int iterations = 0;
    std::vector<double> inertia_history;  // one entry per assignment step
};

/// Lloyd's algorithm on the rows of `points` with k-means++ seeding.
/// Assignment ties go to the lowest cluster index; an empty cluster is
/// re-seeded at the point farthest from its current centroid. Throws
/// NumericError if inertia ever increases.
KMeansResult lloyd_kmeans(const Eigen::MatrixXd& points, int K, std::uint64_t seed, const KMeansOptions& options = {});

struct SegmentationMap {
    std::size_t image_rows = 0;
    std::size_t image_cols = 0;
    std::size_t grid_h = 0;
    std::size_t grid_w = 0;
    std::size_t block_size = 16;
    std::size_t stride = 16;
    int K = 0;
    /// Class in [0, K); invalid blocks carry K.
    std::vector<int> block_labels;
    std::vector<int> pixel_labels;
    /// Centroids in the original (unstandardized) feature units.
    Eigen::MatrixXd centroids;
    double inertia = 0.0;  // in standardized units
    int iterations = 0;
    std::vector<double> inertia_history;

    std::vector<std::size_t> class_counts() const;
};

/// Standardizes each feature dimension over the valid blocks and clusters
/// them into K classes.
SegmentationMap kmeans(const BlockFeatures& features, int K, std::uint64_t seed, const KMeansOptions& options = {});

/// Nearest-block label image for the given block geometry.
std::vector<int> pixel_labels_from_blocks(std::span<const int> block_labels, std::size_t grid_h, std::size_t grid_w,
                                          std::size_t image_rows, std::size_t image_cols, std::size_t block_size,
                                          std::size_t stride);

struct AccuracyReport {
    double accuracy = 0.0;
    /// permutation[predicted] = truth class it is matched to.
    std::vector<int> permutation;
    /// confusion[truth][predicted], counted over valid blocks.
    std::vector<std::vector<std::size_t>> confusion;
    std::size_t evaluated = 0;
};

/// Best agreement over all relabelings of `predicted` (exhaustive, classes
/// <= 8). Predicted labels outside [0, classes) mark invalid blocks and are
/// skipped; truth labels must lie in [0, classes).
AccuracyReport label_accuracy(std::span<const int> predicted, std::span<const int> truth, int classes);
AccuracyReport label_accuracy(const SegmentationMap& predicted, std::span<const int> truth);

}  // namespace armafield
