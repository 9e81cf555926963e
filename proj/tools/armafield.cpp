// armafield: synthesize, estimate and segment 2D ARMA random fields.

#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "armafield/app.hpp"
#include "armafield/error.hpp"
#include "armafield/serialize.hpp"

namespace {

using namespace armafield;

ModelOrder parse_order(const std::string& order_text, const std::string& ar_text) {
    const auto o = parse_int_list(order_text);
    if (o.size() != 4) throw InvalidArgument("--order expects p1,p2,q1,q2");
    ModelOrder order = ModelOrder::with_default_ar(o[0], o[1], o[2], o[3]);
    if (!ar_text.empty()) {
        const auto k = parse_int_list(ar_text);
        if (k.size() != 2) throw InvalidArgument("--ar-approx expects K1,K2");
        order.K1 = k[0];
        order.K2 = k[1];
    }
    order.validate_for_estimation();
    return order;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"2D ARMA random-field modelling: synthesis, two-stage Yule-Walker least-squares estimation and "
                 "block-wise k-means texture segmentation.\n"
                 "Exit codes: 0 success, 1 usage, 2 numeric failure, 3 degenerate data, 4 I/O."};
    cli.require_subcommand(1);

    app::SynthOptions synth;
    std::uint64_t synth_seed = 0;
    auto* synth_cmd = cli.add_subcommand("synth", "Synthesize an ARMA field from a JSON parameter file");
    synth_cmd->add_option("params", synth.params, "Parameter file {order, a, b, sigma2, rows, cols, burn_in, seed}")
        ->required();
    synth_cmd->add_option("--out", synth.out_dir, "Output directory")->capture_default_str();
    auto* synth_seed_opt = synth_cmd->add_option("--seed", synth_seed, "Override the seed in the parameter file");
    synth_cmd->add_option("--name", synth.name, "Output file stem")->capture_default_str();
    synth_cmd->add_option("--maxval", synth.maxval, "PGM maxval of the quantized field")
        ->capture_default_str()
        ->check(CLI::Range(1, 65535));

    app::EstimateOptions est;
    std::string est_order = "1,1,1,1";
    std::string est_ar;
    auto* est_cmd = cli.add_subcommand("estimate", "Fit an ARMA model to a PGM image");
    est_cmd->add_option("input", est.input, "Input PGM (P5)")->required();
    est_cmd->add_option("--order", est_order, "ARMA order p1,p2,q1,q2")->capture_default_str();
    est_cmd->add_option("--ar-approx", est_ar, "Long-AR order K1,K2 (default 2*max(p1+q1,p2+q2)+2 on both axes)");
    est_cmd->add_option("--out", est.out_dir, "Output directory")->capture_default_str();
    est_cmd->add_option("--name", est.name, "Output file stem")->capture_default_str();

    app::SegmentOptions seg;
    std::string seg_order = "0,0,1,1";
    std::string seg_ar = "4,4";
    std::string seg_variant = "innovation";
    bool no_sigma = false;
    seg.threads = std::max(1u, std::thread::hardware_concurrency());
    auto* seg_cmd = cli.add_subcommand("segment", "Segment a PGM image into texture classes");
    seg_cmd->add_option("input", seg.input, "Input PGM (P5)")->required();
    seg_cmd->add_option("--order", seg_order, "Per-block ARMA order p1,p2,q1,q2")->capture_default_str();
    seg_cmd->add_option("--ar-approx", seg_ar, "Per-block long-AR order K1,K2")->capture_default_str();
    seg_cmd->add_option("--block", seg.block_size, "Block side in pixels")->capture_default_str();
    seg_cmd->add_option("--classes", seg.classes, "Number of k-means classes")->capture_default_str();
    seg_cmd->add_option("--seed", seg.seed, "k-means++ seed")->capture_default_str();
    seg_cmd->add_option("--stride", seg.stride, "Block stride (0 = block size, non-overlapping)")->capture_default_str();
    seg_cmd->add_flag("--no-sigma-feature", no_sigma, "Cluster on theta only, without log sigma2");
    seg_cmd->add_option("--reconstruction", seg_variant, "Reconstruction variant")
        ->capture_default_str()
        ->check(CLI::IsMember({"innovation", "zero"}));
    seg_cmd->add_option("--threads", seg.threads, "Worker threads for block fits (output does not depend on it)")
        ->capture_default_str();
    seg_cmd->add_option("--out", seg.out_dir, "Output directory")->capture_default_str();

    app::EvaluateOptions eval;
    int eval_classes = 0;
    auto* eval_cmd = cli.add_subcommand("evaluate", "Permutation-matched block accuracy of a label CSV");
    eval_cmd->add_option("prediction", eval.predicted, "Predicted label CSV")->required();
    eval_cmd->add_option("truth", eval.truth, "Ground-truth label CSV")->required();
    auto* eval_classes_opt =
        eval_cmd->add_option("--classes", eval_classes, "Number of classes (default: max truth label + 1)");

    app::CompositeOptions comp;
    auto* comp_cmd = cli.add_subcommand("make-composite", "Build the synthetic three-texture test image");
    comp_cmd->group("");
    comp_cmd->add_option("--out", comp.out_dir, "Output directory")->capture_default_str();
    comp_cmd->add_option("--seed", comp.seed, "Seed")->capture_default_str();
    comp_cmd->add_option("--size", comp.size, "Image side in pixels")->capture_default_str();
    comp_cmd->add_option("--block", comp.block_size, "Block side the bands align to")->capture_default_str();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : app::kUsage;
    }

    try {
        if (*synth_cmd) {
            if (*synth_seed_opt) synth.seed = synth_seed;
            return app::run_synth(synth, std::cout, std::cerr);
        }
        if (*est_cmd) {
            est.order = parse_order(est_order, est_ar);
            return app::run_estimate(est, std::cout, std::cerr);
        }
        if (*seg_cmd) {
            seg.order = parse_order(seg_order, seg_ar);
            seg.sigma_feature = !no_sigma;
            seg.reconstruction =
                seg_variant == "zero" ? ReconstructionVariant::zero : ReconstructionVariant::innovation;
            return app::run_segment(seg, std::cout, std::cerr);
        }
        if (*eval_cmd) {
            if (*eval_classes_opt) eval.classes = eval_classes;
            return app::run_evaluate(eval, std::cout, std::cerr);
        }
        if (*comp_cmd) return app::run_make_composite(comp, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "armafield: " << e.what() << "\n";
        return app::exit_code_for(e);
    }
    return app::kUsage;
}
