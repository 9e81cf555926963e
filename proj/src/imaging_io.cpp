#include "armafield/imaging_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "armafield/error.hpp"

namespace armafield {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long read_number(const char* what) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
            throw FormatError(std::string("PGM: malformed header, expected ") + what);
        unsigned long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > std::numeric_limits<std::uint32_t>::max())
                throw FormatError(std::string("PGM: ") + what + " too large");
            ++pos_;
        }
        return value;
    }

    std::size_t pos_ = 0;
    std::span<const std::uint8_t> bytes_;
};

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw FormatError("PGM: bad magic number");
    if (bytes[1] != '5') throw FormatError(std::string("PGM: unsupported format P") + static_cast<char>(bytes[1]) +
                                           " (only binary P5 is supported)");
    HeaderReader reader(bytes);
    reader.pos_ = 2;
    if (reader.pos_ >= bytes.size() || !(std::isspace(bytes[2]) || bytes[2] == '#'))
        throw FormatError("PGM: bad magic number");
    GrayImage img;
    img.width = reader.read_number("width");
    img.height = reader.read_number("height");
    const unsigned long maxval = reader.read_number("maxval");
    if (maxval == 0 || maxval > 65535) throw FormatError("PGM: maxval must be in [1, 65535]");
    if (img.width == 0 || img.height == 0) throw FormatError("PGM: zero image dimension");
    img.maxval = static_cast<int>(maxval);
    if (reader.pos_ >= bytes.size() || !std::isspace(bytes[reader.pos_]))
        throw FormatError("PGM: missing whitespace after maxval");
    std::size_t pos = reader.pos_ + 1;

    const std::size_t bytes_per_sample = img.maxval > 255 ? 2 : 1;
    const std::size_t count = img.width * img.height;
    if (bytes.size() - pos < count * bytes_per_sample)
        throw FormatError("PGM: truncated payload (" + std::to_string(bytes.size() - pos) + " of " +
                          std::to_string(count * bytes_per_sample) + " bytes)");
    img.samples.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::uint16_t v = bytes[pos++];
        if (bytes_per_sample == 2) v = static_cast<std::uint16_t>((v << 8) | bytes[pos++]);
        if (v > img.maxval) throw FormatError("PGM: sample exceeds maxval");
        img.samples[k] = v;
    }
    return img;
}

std::vector<std::uint8_t> write_pgm(const GrayImage& image) {
    if (image.maxval < 1 || image.maxval > 65535) throw InvalidArgument("PGM: maxval must be in [1, 65535]");
    if (image.samples.size() != image.width * image.height) throw InvalidArgument("PGM: sample count mismatch");
    const std::string header = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n" +
                               std::to_string(image.maxval) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const bool wide = image.maxval > 255;
    out.reserve(out.size() + image.samples.size() * (wide ? 2 : 1));
    for (std::uint16_t v : image.samples) {
        if (v > image.maxval) throw InvalidArgument("PGM: sample exceeds maxval");
        if (wide) out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v & 0xff));
    }
    return out;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_pgm(bytes);
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& image) {
    const auto bytes = write_pgm(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

Field image_values(const GrayImage& image) {
    std::vector<double> values(image.samples.begin(), image.samples.end());
    return Field(image.height, image.width, std::move(values));
}

CenteredField to_field(const GrayImage& image) { return zero_mean(image_values(image)); }

QuantizedField quantize(const Field& field, int maxval) {
    double peak = 0.0;
    for (double v : field.values()) peak = std::max(peak, std::abs(v));
    const double offset = maxval / 2.0;
    const double scale = peak > 0.0 ? offset / peak : 1.0;
    return quantize(field, maxval, offset, scale);
}

QuantizedField quantize(const Field& field, int maxval, double offset, double scale) {
    if (maxval < 1 || maxval > 65535) throw InvalidArgument("quantize: maxval must be in [1, 65535]");
    QuantizedField out;
    out.offset = offset;
    out.scale = scale;
    out.image.width = field.cols();
    out.image.height = field.rows();
    out.image.maxval = maxval;
    out.image.samples.reserve(field.size());
    for (double v : field.values()) {
        const double level = std::clamp(std::round(offset + scale * v), 0.0, static_cast<double>(maxval));
        out.image.samples.push_back(static_cast<std::uint16_t>(level));
    }
    return out;
}

Field dequantize(const GrayImage& image, double offset, double scale) {
    if (!(scale != 0.0) || !std::isfinite(scale)) throw InvalidArgument("dequantize: scale must be finite and non-zero");
    std::vector<double> values;
    values.reserve(image.samples.size());
    for (std::uint16_t s : image.samples) values.push_back((static_cast<double>(s) - offset) / scale);
    return Field(image.height, image.width, std::move(values));
}

GrayImage render_reconstruction(const Field& image, const BlockFeatures& blocks, int maxval,
                                ReconstructionVariant variant) {
    if (image.rows() != blocks.image_rows || image.cols() != blocks.image_cols)
        throw InvalidArgument("render_reconstruction: image does not match block geometry");
    if (blocks.fits.size() != blocks.block_count())
        throw InvalidArgument("render_reconstruction: missing block fits");
    Field out = image;
    const ModelOrder& order = blocks.order;
    const auto ar = lag_order(order.p1, order.p2);
    const auto ma = lag_order(order.q1, order.q2);
    const auto K1 = static_cast<std::size_t>(order.K1);
    const auto K2 = static_cast<std::size_t>(order.K2);
    const auto first_row = static_cast<std::size_t>(order.margin_rows()) + 1;
    const auto first_col = static_cast<std::size_t>(order.margin_cols()) + 1;
    const std::size_t bs = blocks.block_size;

    for (const BlockFit& block : blocks.fits) {
        if (!block.valid) continue;
        const ArmaFit& fit = block.fit;
        if (fit.residual.rows() + first_row != bs || fit.stage1.residual.rows() + K1 != bs)
            throw InvalidArgument("render_reconstruction: fit does not match block size");
        const auto a = fit.params.a.values();
        const auto b = fit.params.b.values();
        const Field& w = fit.stage1.residual;
        auto x = [&](std::size_t n, std::size_t m) { return image(block.row0 + n, block.col0 + m) - block.mean; };
        for (std::size_t n = first_row; n < bs; ++n) {
            for (std::size_t m = first_col; m < bs; ++m) {
                double value = 0.0;
                for (std::size_t k = 0; k < ar.size(); ++k) value -= a[k] * x(n - ar[k].i, m - ar[k].j);
                for (std::size_t k = 0; k < ma.size(); ++k) value += b[k] * w(n - ma[k].i - K1, m - ma[k].j - K2);
                if (variant == ReconstructionVariant::innovation) value += fit.residual(n - first_row, m - first_col);
                out(block.row0 + n, block.col0 + m) = value + block.mean;
            }
        }
    }

    GrayImage img;
    img.width = image.cols();
    img.height = image.rows();
    img.maxval = maxval;
    img.samples.reserve(out.size());
    for (double v : out.values())
        img.samples.push_back(static_cast<std::uint16_t>(std::clamp(std::round(v), 0.0, static_cast<double>(maxval))));
    return img;
}

std::uint8_t label_level(int label, int K) {
    if (label < 0 || label >= K) return 0;
    return static_cast<std::uint8_t>(std::lround(255.0 * (label + 1) / K));
}

GrayImage render_labels(const SegmentationMap& map) {
    GrayImage img;
    img.width = map.image_cols;
    img.height = map.image_rows;
    img.maxval = 255;
    img.samples.reserve(map.pixel_labels.size());
    for (int label : map.pixel_labels) img.samples.push_back(label_level(label, map.K));
    return img;
}

double psnr(const GrayImage& reference, const GrayImage& test) {
    if (reference.width != test.width || reference.height != test.height)
        throw InvalidArgument("psnr: image sizes differ");
    double se = 0.0;
    for (std::size_t k = 0; k < reference.samples.size(); ++k) {
        const double d = static_cast<double>(reference.samples[k]) - static_cast<double>(test.samples[k]);
        se += d * d;
    }
    if (se == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = se / static_cast<double>(reference.samples.size());
    const double peak = reference.maxval;
    return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace armafield
