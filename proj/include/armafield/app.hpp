#pragma once

// Command implementations behind the `armafield` tool. Each command writes
// its files, reports to the given streams and returns a process exit code.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "armafield/field.hpp"
#include "armafield/imaging_io.hpp"
#include "armafield/segmenter.hpp"
#include "armafield/synthesis.hpp"

namespace armafield::app {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kNumeric = 2,     // instability or singular system
    kDegenerate = 3,  // constant / degenerate data
    kIo = 4,
};

/// Maps a library exception to its exit code.
int exit_code_for(const std::exception& error);

struct SynthOptions {
    std::filesystem::path params;
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;  // overrides the parameter file
    std::string name = "field";
    int maxval = 65535;
};

/// Writes <name>.pgm and <name>.json {params, seed, mean, scale, ...}.
int run_synth(const SynthOptions& options, std::ostream& out, std::ostream& err);

struct EstimateOptions {
    std::filesystem::path input;
    ModelOrder order = ModelOrder::with_default_ar(1, 1, 1, 1);
    std::filesystem::path out_dir = ".";
    std::string name = "fit";
};

/// Writes <name>.json with the fitted model and echoes it on `out`.
int run_estimate(const EstimateOptions& options, std::ostream& out, std::ostream& err);

struct SegmentOptions {
    std::filesystem::path input;
    ModelOrder order = default_block_order();
    std::size_t block_size = 16;
    std::size_t stride = 0;
    int classes = 3;
    std::uint64_t seed = 0;
    bool sigma_feature = true;
    ReconstructionVariant reconstruction = ReconstructionVariant::innovation;
    unsigned threads = 1;
    std::filesystem::path out_dir = ".";
};

/// Writes labels.pgm, labels.csv, segmentation.json and reconstruction.pgm.
int run_segment(const SegmentOptions& options, std::ostream& out, std::ostream& err);

struct EvaluateOptions {
    std::filesystem::path predicted;
    std::filesystem::path truth;
    /// Number of classes; inferred from the truth grid when absent.
    /// Predicted labels >= classes count as invalid blocks.
    std::optional<int> classes;
};

/// Prints {accuracy, permutation, confusion_matrix, evaluated}.
int run_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);

struct CompositeOptions {
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;
    std::size_t size = 256;
    std::size_t block_size = 16;
    std::size_t burn_in = 64;
};

/// Texture `index` (0 white noise, 1 separable AR(1,1) with poles 0.5,
/// 2 ARMA(1,1,1,1)) of the composite image, unit innovation variance.
SynthesisConfig composite_texture(int index, std::size_t size, std::size_t burn_in, std::uint64_t seed);

/// Block-level truth grid: band of block column c is floor(3 c / grid_w).
std::vector<int> composite_truth(std::size_t grid_rows, std::size_t grid_cols);

/// The composite as a real field (before quantization).
Field composite_field(const CompositeOptions& options);

/// Builds the three-texture test image (white noise | separable AR(1,1) |
/// ARMA(1,1,1,1), vertical bands aligned to block boundaries) and writes
/// composite.pgm, composite.json and truth.csv.
int run_make_composite(const CompositeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace armafield::app
