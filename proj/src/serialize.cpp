#include "armafield/serialize.hpp"

#include <fstream>
#include <sstream>

#include "armafield/error.hpp"
#include "armafield/random.hpp"

namespace armafield {

using nlohmann::json;

json to_json(const ModelOrder& order) {
    return {{"p1", order.p1}, {"p2", order.p2}, {"q1", order.q1},
            {"q2", order.q2}, {"K1", order.K1}, {"K2", order.K2}};
}

namespace {

std::string lag_key(const Lag& lag) { return std::to_string(lag.i) + "," + std::to_string(lag.j); }

}  // namespace

json to_json(const LagCoefficients& coefficients) {
    json out = json::object();
    const auto lags = coefficients.lags();
    for (std::size_t k = 0; k < lags.size(); ++k) out[lag_key(lags[k])] = coefficients.values()[k];
    return out;
}

LagCoefficients coefficients_from_json(const json& doc, int max_i, int max_j) {
    LagCoefficients out(max_i, max_j);
    if (doc.is_null()) return out;
    if (!doc.is_object()) throw InvalidArgument("coefficients must be an object of \"i,j\": value");
    for (const auto& [key, value] : doc.items()) {
        const auto parts = parse_int_list(key);
        if (parts.size() != 2) throw InvalidArgument("bad coefficient key \"" + key + "\"");
        out.set(parts[0], parts[1], value.get<double>());
    }
    return out;
}

json fit_to_json(const ArmaFit& fit) {
    json theta = json::array();
    for (Eigen::Index k = 0; k < fit.theta.size(); ++k) theta.push_back(fit.theta[k]);
    return {{"order", to_json(fit.order)},
            {"theta", theta},
            {"a", to_json(fit.params.a)},
            {"b", to_json(fit.params.b)},
            {"sigma2", fit.sigma2_hat},
            {"regularized", fit.regularized},
            {"regression_rows", fit.regression_rows}};
}

SynthesisConfig synthesis_config_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("order")) throw InvalidArgument("parameter file needs an \"order\" entry");
    const auto o = doc.at("order").get<std::vector<int>>();
    if (o.size() != 4) throw InvalidArgument("\"order\" must be [p1, p2, q1, q2]");
    SynthesisConfig config;
    config.order = ModelOrder::with_default_ar(o[0], o[1], o[2], o[3]);
    config.order.validate();
    config.params.a = coefficients_from_json(doc.value("a", json()), o[0], o[1]);
    config.params.b = coefficients_from_json(doc.value("b", json()), o[2], o[3]);
    config.params.sigma2 = doc.value("sigma2", 1.0);
    config.rows = doc.value("rows", std::size_t{256});
    config.cols = doc.value("cols", std::size_t{256});
    config.burn_in = doc.value("burn_in", std::size_t{64});
    config.seed = doc.value("seed", std::uint64_t{0});
    return config;
}

json synthesis_config_to_json(const SynthesisConfig& config) {
    const auto& o = config.order;
    return {{"order", {o.p1, o.p2, o.q1, o.q2}},
            {"a", to_json(config.params.a)},
            {"b", to_json(config.params.b)},
            {"sigma2", config.params.sigma2},
            {"rows", config.rows},
            {"cols", config.cols},
            {"burn_in", config.burn_in},
            {"seed", config.seed},
            {"rng", std::string(kRandomAlgorithm)}};
}

json segmentation_to_json(const SegmentationMap& map, const BlockFeatures& features) {
    json centroids = json::array();
    for (Eigen::Index c = 0; c < map.centroids.rows(); ++c) {
        json row = json::array();
        for (Eigen::Index d = 0; d < map.centroids.cols(); ++d) row.push_back(map.centroids(c, d));
        centroids.push_back(row);
    }
    return {{"K", map.K},
            {"inertia", map.inertia},
            {"iterations", map.iterations},
            {"inertia_history", map.inertia_history},
            {"centroids", centroids},
            {"class_counts", map.class_counts()},
            {"grid", {{"rows", map.grid_h}, {"cols", map.grid_w}}},
            {"block_size", map.block_size},
            {"stride", map.stride},
            {"valid_blocks", features.valid_count()},
            {"feature_dim", features.dim},
            {"order", to_json(features.order)}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

std::string label_csv(std::span<const int> labels, std::size_t rows, std::size_t cols) {
    if (labels.size() != rows * cols) throw InvalidArgument("label_csv: size mismatch");
    std::string out;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c) out += ',';
            out += std::to_string(labels[r * cols + c]);
        }
        out += '\n';
    }
    return out;
}

LabelGrid parse_label_csv(const std::string& text) {
    LabelGrid grid;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<int> row;
        try {
            row = parse_int_list(line);
        } catch (const InvalidArgument&) {
            throw FormatError("label CSV: bad row \"" + line + "\"");
        }
        if (grid.rows == 0) grid.cols = row.size();
        if (row.size() != grid.cols) throw FormatError("label CSV: ragged rows");
        grid.labels.insert(grid.labels.end(), row.begin(), row.end());
        ++grid.rows;
    }
    if (grid.rows == 0) throw FormatError("label CSV: empty");
    return grid;
}

LabelGrid read_label_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_label_csv(buffer.str());
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("expected an integer list, got \"" + text + "\"");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw InvalidArgument("expected an integer list, got \"" + text + "\"");
        out.push_back(value);
        pos = comma + 1;
    }
    return out;
}

}  // namespace armafield
