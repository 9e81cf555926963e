#pragma once

// Binary PGM (Netpbm P5) input/output and the rendered outputs of a
// segmentation run.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "armafield/field.hpp"
#include "armafield/segmenter.hpp"

namespace armafield {

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    /// 1..65535; samples use two big-endian bytes when maxval > 255.
    int maxval = 255;
    std::vector<std::uint16_t> samples;  // row-major

    int depth() const noexcept { return maxval > 255 ? 16 : 8; }
    std::uint16_t operator()(std::size_t row, std::size_t col) const { return samples[row * width + col]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

GrayImage read_pgm(std::span<const std::uint8_t> bytes);
/// Canonical header "P5\n<width> <height>\n<maxval>\n" followed by samples.
std::vector<std::uint8_t> write_pgm(const GrayImage& image);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& image);

/// Samples as doubles, unchanged.
Field image_values(const GrayImage& image);
/// Samples as doubles with the mean removed; the mean is kept for
/// reconstruction.
CenteredField to_field(const GrayImage& image);

/// Linear map between a real field and integer levels:
/// level = round(offset + scale * value).
struct QuantizedField {
    GrayImage image;
    double offset = 0.0;
    double scale = 1.0;
};

/// Scales so that the largest |value| spans half the level range around
/// offset = maxval/2.
QuantizedField quantize(const Field& field, int maxval);
QuantizedField quantize(const Field& field, int maxval, double offset, double scale);
Field dequantize(const GrayImage& image, double offset, double scale);

/// How the model output in each block is formed.
enum class ReconstructionVariant {
    /// -sum a x + sum b w + w_final: re-uses the estimated current innovation.
    innovation,
    /// -sum a x + sum b w: one-step prediction without the current innovation.
    zero,
};

/// Per-block ARMA representation of an image. Pixels in the regression
/// region of each valid block get the model output plus the block mean;
/// margins, invalid blocks and uncovered pixels keep the original value.
/// Output levels are clamped to [0, maxval]. `image` holds raw sample values.
GrayImage render_reconstruction(const Field& image, const BlockFeatures& blocks, int maxval,
                                ReconstructionVariant variant = ReconstructionVariant::innovation);

/// 8-bit label image: class c -> round(255 (c+1)/K), invalid (label K) -> 0.
GrayImage render_labels(const SegmentationMap& map);
std::uint8_t label_level(int label, int K);

/// Peak signal-to-noise ratio in dB (+inf for identical images).
double psnr(const GrayImage& reference, const GrayImage& test);

}  // namespace armafield
