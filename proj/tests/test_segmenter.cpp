#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "armafield/error.hpp"
#include "armafield/segmenter.hpp"
#include "armafield/synthesis.hpp"

using namespace armafield;

namespace {

Field texture(double rho, std::size_t size, std::uint64_t seed) {
    SynthesisConfig c;
    c.order = ModelOrder::with_default_ar(1, 1, 0, 0);
    c.params = ArmaParams::zeros(c.order);
    c.params.a.set(1, 0, -rho);
    c.params.a.set(0, 1, -rho);
    c.params.a.set(1, 1, rho * rho);
    c.rows = size;
    c.cols = size;
    c.seed = seed;
    return synthesize(c);
}

// Left half AR(1,1) with poles 0.5, right half white noise.
Field two_texture(std::size_t size, std::uint64_t seed) {
    const Field left = texture(0.5, size, seed);
    const Field right = texture(0.0, size, seed + 1000);
    Field out(size, size);
    for (std::size_t n = 0; n < size; ++n)
        for (std::size_t m = 0; m < size; ++m) out(n, m) = m < size / 2 ? left(n, m) : right(n, m);
    return out;
}

// Oracle for label_accuracy: every relabeling via next_permutation.
double brute_force_accuracy(const std::vector<int>& pred, const std::vector<int>& truth, int classes) {
    std::vector<int> perm(static_cast<std::size_t>(classes));
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t hits = 0;
        for (std::size_t k = 0; k < pred.size(); ++k)
            if (perm[static_cast<std::size_t>(pred[k])] == truth[k]) ++hits;
        best = std::max(best, hits);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(pred.size());
}

bool non_increasing(const std::vector<double>& history) {
    for (std::size_t k = 1; k < history.size(); ++k)
        if (history[k] > history[k - 1] * (1.0 + 1e-12)) return false;
    return true;
}

}  // namespace

TEST_SUITE("segmenter") {

TEST_CASE("block grid at the paper's scale") {
    const BlockFeatures f = extract_features(texture(0.5, 256, 1), default_block_order());
    CHECK(f.grid_h == 16);
    CHECK(f.grid_w == 16);
    CHECK(f.block_count() == 256);
    CHECK(f.valid_count() == 256);
    CHECK(f.dim == default_block_order().theta_size() + 1);
    CHECK(f.features.rows() == 256);

    FeatureOptions no_sigma;
    no_sigma.include_log_sigma2 = false;
    CHECK(extract_features(texture(0.5, 64, 1), default_block_order(), no_sigma).dim == 3);

    const BlockFeatures partial = extract_features(texture(0.5, 100, 1), default_block_order());
    CHECK(partial.grid_h == 6);
}

TEST_CASE("two textures separate in feature space") {
    const BlockFeatures f = extract_features(two_texture(256, 4), default_block_order());
    Eigen::VectorXd centre[2] = {Eigen::VectorXd::Zero(f.dim), Eigen::VectorXd::Zero(f.dim)};
    std::size_t count[2] = {0, 0};
    for (std::size_t b = 0; b < f.block_count(); ++b) {
        const int side = (b % f.grid_w) < f.grid_w / 2 ? 0 : 1;
        centre[side] += f.features.row(static_cast<Eigen::Index>(b)).transpose();
        ++count[side];
    }
    for (int s = 0; s < 2; ++s) centre[s] /= static_cast<double>(count[s]);
    double spread = 0.0;
    for (std::size_t b = 0; b < f.block_count(); ++b) {
        const int side = (b % f.grid_w) < f.grid_w / 2 ? 0 : 1;
        spread += (f.features.row(static_cast<Eigen::Index>(b)).transpose() - centre[side]).norm();
    }
    spread /= static_cast<double>(f.block_count());
    CHECK((centre[0] - centre[1]).norm() > 3.0 * spread);
}

TEST_CASE("constant image has no valid blocks") {
    const BlockFeatures f = extract_features(Field(64, 64, 12.0), default_block_order());
    CHECK(f.block_count() == 16);
    CHECK(f.valid_count() == 0);
    CHECK_THROWS_AS(kmeans(f, 3, 0), DegenerateFieldError);
}

TEST_CASE("block size must fit the model margins") {
    FeatureOptions opts;
    opts.block_size = 6;
    CHECK_THROWS_AS(extract_features(texture(0.5, 64, 1), default_block_order(), opts), InvalidArgument);
}

TEST_CASE("feature spread shrinks with block size") {
    const Field x = texture(0.5, 512, 9);
    FeatureOptions small, large;
    small.block_size = 16;
    large.block_size = 32;
    const BlockFeatures a = extract_features(x, default_block_order(), small);
    const BlockFeatures b = extract_features(x, default_block_order(), large);
    for (std::size_t d = 0; d < a.dim; ++d) {
        const auto sd = [d](const BlockFeatures& f) {
            const Eigen::VectorXd col = f.features.col(static_cast<Eigen::Index>(d));
            return std::sqrt((col.array() - col.mean()).square().mean());
        };
        CHECK(sd(b) < sd(a));
    }
}

TEST_CASE("kmeans with one class") {
    const BlockFeatures f = extract_features(texture(0.3, 64, 2), default_block_order());
    const SegmentationMap map = kmeans(f, 1, 0);
    for (int l : map.block_labels) CHECK(l == 0);
    const Eigen::VectorXd mean = f.features.colwise().mean().transpose();
    CHECK((map.centroids.row(0).transpose() - mean).norm() < 1e-9 * (1.0 + mean.norm()));
    CHECK(map.pixel_labels.size() == 64u * 64u);
}

TEST_CASE("three separated clusters are recovered exactly") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        Eigen::MatrixXd points(150, 2);
        std::vector<int> truth(150);
        const double centres[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {5.0, 8.660254037844386}};
        for (int k = 0; k < 150; ++k) {
            truth[static_cast<std::size_t>(k)] = k / 50;
            points(k, 0) = centres[k / 50][0] + g(rng);
            points(k, 1) = centres[k / 50][1] + g(rng);
        }
        const KMeansResult r = lloyd_kmeans(points, 3, seed);
        CHECK(label_accuracy(r.labels, truth, 3).accuracy == 1.0);
        CHECK(non_increasing(r.inertia_history));
    }
}

TEST_CASE("one point per cluster") {
    Eigen::MatrixXd points(5, 2);
    points << 0, 0, 1, 0, 0, 1, 3, 3, -2, 5;
    const KMeansResult r = lloyd_kmeans(points, 5, 1);
    CHECK(r.inertia == 0.0);
    std::vector<int> sorted = r.labels;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4});
    CHECK_THROWS_AS(lloyd_kmeans(points, 6, 1), InvalidArgument);
    CHECK_THROWS_AS(lloyd_kmeans(points, 0, 1), InvalidArgument);
}

TEST_CASE("inertia never increases on random data") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::MatrixXd points(200, 3);
        for (Eigen::Index i = 0; i < points.size(); ++i) points.data()[i] = u(rng);
        const KMeansResult r = lloyd_kmeans(points, 6, seed);
        CHECK(non_increasing(r.inertia_history));
        CHECK(r.iterations <= 100);
    }
}

TEST_CASE("segmentation does not depend on the thread count") {
    const Field x = two_texture(128, 7);
    FeatureOptions one, four;
    four.threads = 4;
    const BlockFeatures a = extract_features(x, default_block_order(), one);
    const BlockFeatures b = extract_features(x, default_block_order(), four);
    CHECK(a.features == b.features);
    CHECK(a.valid == b.valid);
    const SegmentationMap ma = kmeans(a, 2, 3);
    const SegmentationMap mb = kmeans(b, 2, 3);
    CHECK(ma.block_labels == mb.block_labels);
    CHECK(ma.centroids == mb.centroids);
    CHECK(ma.inertia_history == mb.inertia_history);
}

TEST_CASE("pixel labels replicate the nearest block") {
    const std::vector<int> blocks{0, 1, 2, 3};
    const std::vector<int> px = pixel_labels_from_blocks(blocks, 2, 2, 5, 5, 2, 2);
    REQUIRE(px.size() == 25);
    CHECK(px[0] == 0);
    CHECK(px[3] == 1);
    CHECK(px[2 * 5 + 1] == 2);
    CHECK(px[4 * 5 + 4] == 3);  // uncovered pixels take the closest block
}

TEST_CASE("label_accuracy examples") {
    const std::vector<int> truth{0, 0, 1, 1, 2, 2};
    CHECK(label_accuracy(truth, truth, 3).accuracy == 1.0);
    const std::vector<int> cycled{1, 1, 2, 2, 0, 0};
    const AccuracyReport r = label_accuracy(cycled, truth, 3);
    CHECK(r.accuracy == 1.0);
    CHECK(r.permutation == std::vector<int>{2, 0, 1});
    CHECK(r.confusion[0][1] == 2);

    const std::vector<int> with_invalid{0, 3, 1, 1, 2, 2};
    const AccuracyReport skipped = label_accuracy(with_invalid, truth, 3);
    CHECK(skipped.evaluated == 5);
    CHECK(skipped.accuracy == 1.0);

    CHECK_THROWS_AS(label_accuracy(std::vector<int>{0, 1}, truth, 3), InvalidArgument);
}

TEST_CASE("label_accuracy matches brute force and is permutation invariant") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> lab(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> pred(40), truth(40);
        for (auto& v : pred) v = lab(rng);
        for (auto& v : truth) v = lab(rng);
        const double acc = label_accuracy(pred, truth, 4).accuracy;
        CHECK(acc == doctest::Approx(brute_force_accuracy(pred, truth, 4)));
        std::vector<int> relabeled = truth;
        for (auto& v : relabeled) v = (v + 1) % 4;
        CHECK(label_accuracy(pred, relabeled, 4).accuracy == acc);
        CHECK(label_accuracy(truth, pred, 4).accuracy == acc);
    }
}

TEST_CASE("random predictions stay near chance") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> lab(0, 2);
    std::vector<int> truth(256);
    for (std::size_t k = 0; k < truth.size(); ++k) truth[k] = static_cast<int>(k % 3);
    int above = 0;
    double mean = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int> pred(256);
        for (auto& v : pred) v = lab(rng);
        const double acc = label_accuracy(pred, truth, 3).accuracy;
        mean += acc / 1000.0;
        if (acc > 0.45) ++above;
    }
    CHECK(mean > 1.0 / 3.0);
    CHECK(above <= 10);
}

}  // TEST_SUITE
