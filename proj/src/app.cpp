#include "armafield/app.hpp"

#include <algorithm>
#include <cmath>

#include "armafield/error.hpp"
#include "armafield/random.hpp"
#include "armafield/segmenter.hpp"
#include "armafield/serialize.hpp"
#include "armafield/ywls.hpp"

namespace armafield::app {

using nlohmann::json;

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const IoError*>(&error)) return kIo;
    if (dynamic_cast<const DegenerateFieldError*>(&error)) return kDegenerate;
    if (dynamic_cast<const NumericError*>(&error)) return kNumeric;
    if (dynamic_cast<const nlohmann::json::exception*>(&error)) return kIo;
    if (dynamic_cast<const std::filesystem::filesystem_error*>(&error)) return kIo;
    return kUsage;
}

namespace {

template <class Body>
int guarded(const char* command, std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "armafield " << command << ": " << e.what() << "\n";
        return exit_code_for(e);
    }
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

int run_synth(const SynthOptions& options, std::ostream& out, std::ostream& err) {
    return guarded("synth", err, [&] {
        SynthesisConfig config = synthesis_config_from_json(read_json_file(options.params));
        if (options.seed) config.seed = *options.seed;
        if (!stability_check(config.order, config.params))
            throw InstabilityError("unstable parameters: the AR part's impulse response does not decay");
        const Field field = synthesize(config);
        const QuantizedField q = quantize(field, options.maxval);

        ensure_dir(options.out_dir);
        const auto pgm = options.out_dir / (options.name + ".pgm");
        const auto sidecar = options.out_dir / (options.name + ".json");
        write_pgm_file(pgm, q.image);
        const json doc = {{"params", synthesis_config_to_json(config)},
                          {"seed", config.seed},
                          {"mean", q.offset},
                          {"scale", q.scale},
                          {"maxval", options.maxval}};
        write_text_file(sidecar, doc.dump(2) + "\n");
        out << pgm.string() << "\n" << sidecar.string() << "\n";
        return static_cast<int>(kOk);
    });
}

int run_estimate(const EstimateOptions& options, std::ostream& out, std::ostream& err) {
    return guarded("estimate", err, [&] {
        options.order.validate_for_estimation();
        const GrayImage image = read_pgm_file(options.input);
        const CenteredField centered = to_field(image);
        const ArmaFit fit = estimate(centered.field, options.order);
        const std::string text = fit_to_json(fit).dump(2) + "\n";
        ensure_dir(options.out_dir);
        write_text_file(options.out_dir / (options.name + ".json"), text);
        out << text;
        return static_cast<int>(kOk);
    });
}

int run_segment(const SegmentOptions& options, std::ostream& out, std::ostream& err) {
    return guarded("segment", err, [&] {
        const GrayImage image = read_pgm_file(options.input);
        const std::size_t stride = options.stride == 0 ? options.block_size : options.stride;
        if (options.block_size == 0) throw InvalidArgument("block size must be positive");
        if (image.height < 2 * options.block_size || image.width < 2 * options.block_size)
            throw InvalidArgument("input must hold at least 2 blocks per side");
        const Field values = image_values(image);
        FeatureOptions fopt;
        fopt.block_size = options.block_size;
        fopt.stride = stride;
        fopt.include_log_sigma2 = options.sigma_feature;
        fopt.threads = options.threads;
        const BlockFeatures features = extract_features(values, options.order, fopt);
        const SegmentationMap map = kmeans(features, options.classes, options.seed);

        ensure_dir(options.out_dir);
        write_pgm_file(options.out_dir / "labels.pgm", render_labels(map));
        write_text_file(options.out_dir / "labels.csv", label_csv(map.block_labels, map.grid_h, map.grid_w));
        write_pgm_file(options.out_dir / "reconstruction.pgm",
                       render_reconstruction(values, features, image.maxval, options.reconstruction));
        const std::string summary = segmentation_to_json(map, features).dump(2) + "\n";
        write_text_file(options.out_dir / "segmentation.json", summary);
        out << summary;
        return static_cast<int>(kOk);
    });
}

int run_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err) {
    return guarded("evaluate", err, [&] {
        const LabelGrid pred = read_label_csv(options.predicted);
        const LabelGrid truth = read_label_csv(options.truth);
        if (pred.rows != truth.rows || pred.cols != truth.cols)
            throw InvalidArgument("shape mismatch: prediction " + std::to_string(pred.rows) + "x" +
                                  std::to_string(pred.cols) + ", truth " + std::to_string(truth.rows) + "x" +
                                  std::to_string(truth.cols));
        const int classes = options.classes.value_or(*std::max_element(truth.labels.begin(), truth.labels.end()) + 1);
        const AccuracyReport report = label_accuracy(pred.labels, truth.labels, classes);
        const json doc = {{"accuracy", report.accuracy},
                          {"permutation", report.permutation},
                          {"confusion_matrix", report.confusion},
                          {"evaluated", report.evaluated}};
        out << doc.dump(2) << "\n";
        return static_cast<int>(kOk);
    });
}

SynthesisConfig composite_texture(int index, std::size_t size, std::size_t burn_in, std::uint64_t seed) {
    SynthesisConfig config;
    config.rows = size;
    config.cols = size;
    config.burn_in = burn_in;
    config.seed = RandomStream(seed, static_cast<std::uint64_t>(index) + 1).next_u64();
    switch (index) {
        case 0:
            config.order = {0, 0, 0, 0, 1, 1};
            break;
        case 1:
            config.order = ModelOrder::with_default_ar(1, 1, 0, 0);
            config.params = ArmaParams::zeros(config.order);
            config.params.a.set(1, 0, -0.5);
            config.params.a.set(0, 1, -0.5);
            config.params.a.set(1, 1, 0.25);
            return config;
        case 2:
            config.order = ModelOrder::with_default_ar(1, 1, 1, 1);
            config.params = ArmaParams::zeros(config.order);
            config.params.a.set(1, 0, -0.5);
            config.params.a.set(0, 1, -0.4);
            config.params.a.set(1, 1, 0.2);
            config.params.b.set(1, 0, 0.3);
            config.params.b.set(0, 1, 0.3);
            config.params.b.set(1, 1, 0.09);
            return config;
        default:
            throw InvalidArgument("composite texture index must be 0, 1 or 2");
    }
    config.params = ArmaParams::zeros(config.order);
    return config;
}

std::vector<int> composite_truth(std::size_t grid_rows, std::size_t grid_cols) {
    std::vector<int> truth(grid_rows * grid_cols);
    for (std::size_t r = 0; r < grid_rows; ++r)
        for (std::size_t c = 0; c < grid_cols; ++c) truth[r * grid_cols + c] = static_cast<int>(3 * c / grid_cols);
    return truth;
}

Field composite_field(const CompositeOptions& options) {
    if (options.block_size == 0 || options.size < 3 * options.block_size)
        throw InvalidArgument("make-composite: size must hold at least 3 blocks");
    const std::size_t grid = options.size / options.block_size;
    Field composite(options.size, options.size);
    for (int t = 0; t < 3; ++t) {
        const Field texture = synthesize(composite_texture(t, options.size, options.burn_in, options.seed));
        for (std::size_t c = 0; c < options.size; ++c) {
            const std::size_t block_col = std::min(c / options.block_size, grid - 1);
            if (static_cast<int>(3 * block_col / grid) != t) continue;
            for (std::size_t r = 0; r < options.size; ++r) composite(r, c) = texture(r, c);
        }
    }
    return composite;
}

int run_make_composite(const CompositeOptions& options, std::ostream& out, std::ostream& err) {
    return guarded("make-composite", err, [&] {
        const Field composite = composite_field(options);
        const QuantizedField q = quantize(composite, 255);
        const std::size_t grid = options.size / options.block_size;

        ensure_dir(options.out_dir);
        write_pgm_file(options.out_dir / "composite.pgm", q.image);
        write_text_file(options.out_dir / "truth.csv", label_csv(composite_truth(grid, grid), grid, grid));
        json textures = json::array();
        for (int t = 0; t < 3; ++t)
            textures.push_back(synthesis_config_to_json(composite_texture(t, options.size, options.burn_in, options.seed)));
        const json doc = {{"seed", options.seed},
                          {"size", options.size},
                          {"block_size", options.block_size},
                          {"textures", textures},
                          {"mean", q.offset},
                          {"scale", q.scale}};
        write_text_file(options.out_dir / "composite.json", doc.dump(2) + "\n");
        out << (options.out_dir / "composite.pgm").string() << "\n";
        return static_cast<int>(kOk);
    });
}

}  // namespace armafield::app
