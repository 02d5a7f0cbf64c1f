#include "binabc/problems/binnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace binabc {

namespace {

void check_shapes(const BinNetShape& shape, const BitVector& weights) {
    if (shape.input_dim == 0 || shape.hidden == 0)
        throw std::invalid_argument("binnn: shape must have inputs and hidden units");
    if (weights.dim() != shape.weight_count())
        throw std::invalid_argument("binnn: weight vector dimension mismatch");
}

void check_dataset(const BinNetShape& shape, const LabeledDataset& data) {
    if (data.inputs.size() != data.labels.size())
        throw std::invalid_argument("binnn: inputs and labels differ in count");
    if (data.input_dim != shape.input_dim)
        throw std::invalid_argument("binnn: dataset input dimension mismatch");
    for (const auto& in : data.inputs)
        if (in.dim() != data.input_dim)
            throw std::invalid_argument("binnn: example dimension mismatch");
}

struct UnpackedNet {
    std::vector<BitVector> rows;  // hidden x input weights, one row per unit
    BitVector out;                // output weights
};

UnpackedNet unpack(const BinNetShape& shape, const BitVector& weights) {
    UnpackedNet net;
    net.rows.reserve(shape.hidden);
    for (std::size_t j = 0; j < shape.hidden; ++j)
        net.rows.push_back(weights.slice(j * shape.input_dim, shape.input_dim));
    net.out = weights.slice(shape.input_dim * shape.hidden, shape.hidden);
    return net;
}

// With bits standing for +/-1, a dot product over d dimensions is
// d - 2 * hamming(a, b); the sign test "dot >= 0" becomes
// 2 * hamming <= d.
int predict_unpacked(const UnpackedNet& net, const BinNetShape& shape,
                     const BitVector& input, BitVector& act_scratch) {
    for (std::size_t j = 0; j < shape.hidden; ++j) {
        const std::size_t disagree = hamming(net.rows[j], input);
        act_scratch.set_bit(j, 2 * disagree <= shape.input_dim);
    }
    const std::size_t out_disagree = hamming(net.out, act_scratch);
    return 2 * out_disagree <= shape.hidden ? 1 : 0;
}

}  // namespace

int binnn_predict(const BinNetShape& shape, const BitVector& weights,
                  const BitVector& input) {
    check_shapes(shape, weights);
    if (input.dim() != shape.input_dim)
        throw std::invalid_argument("binnn_predict: input dimension mismatch");
    const UnpackedNet net = unpack(shape, weights);
    BitVector act(shape.hidden);
    return predict_unpacked(net, shape, input, act);
}

double binnn_error(const BinNetShape& shape, const BitVector& weights,
                   const LabeledDataset& data) {
    check_shapes(shape, weights);
    check_dataset(shape, data);
    if (data.size() == 0)
        throw std::invalid_argument("binnn_error: empty dataset");
    const UnpackedNet net = unpack(shape, weights);
    BitVector act(shape.hidden);
    std::size_t wrong = 0;
    for (std::size_t n = 0; n < data.size(); ++n)
        wrong += predict_unpacked(net, shape, data.inputs[n], act) != data.labels[n];
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

double ensemble_vote(const BinNetShape& shape, const std::vector<BitVector>& models,
                     const LabeledDataset& data) {
    if (models.empty())
        throw std::invalid_argument("ensemble_vote: empty model set");
    check_dataset(shape, data);
    if (data.size() == 0)
        throw std::invalid_argument("ensemble_vote: empty dataset");

    std::vector<std::size_t> votes_one(data.size(), 0);
    BitVector act(shape.hidden);
    for (const auto& weights : models) {
        check_shapes(shape, weights);
        const UnpackedNet net = unpack(shape, weights);
        for (std::size_t n = 0; n < data.size(); ++n)
            votes_one[n] += predict_unpacked(net, shape, data.inputs[n], act);
    }

    std::size_t wrong = 0;
    for (std::size_t n = 0; n < data.size(); ++n) {
        const int label = 2 * votes_one[n] >= models.size() ? 1 : 0;
        wrong += label != data.labels[n];
    }
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

LabeledDataset binnn_synthetic_dataset(std::size_t input_dim, std::size_t count,
                                       RngStream& rng) {
    if (input_dim == 0 || count == 0)
        throw std::invalid_argument("binnn_synthetic_dataset: empty shape");
    LabeledDataset data;
    data.input_dim = input_dim;
    data.inputs.reserve(count);
    data.labels.reserve(count);
    // Two antipodal clusters: each point is the plane or its complement with
    // per-bit noise. Labels still come from the proximity rule itself, so the
    // set stays separable even when a noisy point lands past the midplane.
    constexpr double kClusterNoise = 0.15;
    const BitVector plane = bernoulli_vector(input_dim, 0.5, rng);
    const BitVector far_pole = plane.complement();
    for (std::size_t n = 0; n < count; ++n) {
        BitVector in = rng.next_bernoulli(0.5) ? plane : far_pole;
        in ^= bernoulli_vector(input_dim, kClusterNoise, rng);
        const std::size_t disagree = hamming(plane, in);
        data.labels.push_back(2 * disagree <= input_dim ? 1 : 0);
        data.inputs.push_back(std::move(in));
    }
    return data;
}

namespace {

std::uint32_t read_be32(std::istream& in, const char* what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error(std::string("idx: truncated ") + what);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

}  // namespace

std::vector<std::vector<std::uint8_t>> idx_load_images(const std::string& path,
                                                       std::size_t& rows,
                                                       std::size_t& cols) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("idx: cannot open " + path);
    const std::uint32_t magic = read_be32(in, "magic");
    if (magic != 0x00000803u)
        throw std::runtime_error("idx: " + path + " is not an image file");
    const std::uint32_t count = read_be32(in, "count");
    rows = read_be32(in, "rows");
    cols = read_be32(in, "cols");
    std::vector<std::vector<std::uint8_t>> images(count,
                                                  std::vector<std::uint8_t>(rows * cols));
    for (auto& img : images)
        if (!in.read(reinterpret_cast<char*>(img.data()),
                     static_cast<std::streamsize>(img.size())))
            throw std::runtime_error("idx: truncated image data in " + path);
    return images;
}

std::vector<std::uint8_t> idx_load_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("idx: cannot open " + path);
    const std::uint32_t magic = read_be32(in, "magic");
    if (magic != 0x00000801u)
        throw std::runtime_error("idx: " + path + " is not a label file");
    const std::uint32_t count = read_be32(in, "count");
    std::vector<std::uint8_t> labels(count);
    if (!in.read(reinterpret_cast<char*>(labels.data()),
                 static_cast<std::streamsize>(labels.size())))
        throw std::runtime_error("idx: truncated label data in " + path);
    return labels;
}

namespace {

// Bilinear resample of a grayscale image to half-ish resolution.
std::vector<double> resize_bilinear(const std::vector<std::uint8_t>& img, std::size_t rows,
                                    std::size_t cols, std::size_t out_rows,
                                    std::size_t out_cols) {
    std::vector<double> out(out_rows * out_cols);
    const double row_scale = static_cast<double>(rows) / static_cast<double>(out_rows);
    const double col_scale = static_cast<double>(cols) / static_cast<double>(out_cols);
    for (std::size_t r = 0; r < out_rows; ++r) {
        const double src_r = (static_cast<double>(r) + 0.5) * row_scale - 0.5;
        const double r0f = std::floor(src_r);
        const std::size_t r0 = static_cast<std::size_t>(std::clamp(
            r0f, 0.0, static_cast<double>(rows - 1)));
        const std::size_t r1 = std::min(r0 + 1, rows - 1);
        const double fr = std::clamp(src_r - r0f, 0.0, 1.0);
        for (std::size_t c = 0; c < out_cols; ++c) {
            const double src_c = (static_cast<double>(c) + 0.5) * col_scale - 0.5;
            const double c0f = std::floor(src_c);
            const std::size_t c0 = static_cast<std::size_t>(std::clamp(
                c0f, 0.0, static_cast<double>(cols - 1)));
            const std::size_t c1 = std::min(c0 + 1, cols - 1);
            const double fc = std::clamp(src_c - c0f, 0.0, 1.0);
            const double top = (1.0 - fc) * img[r0 * cols + c0] + fc * img[r0 * cols + c1];
            const double bot = (1.0 - fc) * img[r1 * cols + c0] + fc * img[r1 * cols + c1];
            out[r * out_cols + c] = (1.0 - fr) * top + fr * bot;
        }
    }
    return out;
}

}  // namespace

LabeledDataset binnn_digit_dataset(const std::string& images_path,
                                   const std::string& labels_path, int digit_a,
                                   int digit_b) {
    if (digit_a == digit_b)
        throw std::invalid_argument("binnn_digit_dataset: classes must differ");
    std::size_t rows = 0, cols = 0;
    const auto images = idx_load_images(images_path, rows, cols);
    const auto labels = idx_load_labels(labels_path);
    if (images.size() != labels.size())
        throw std::runtime_error("binnn_digit_dataset: image and label counts differ");

    const std::size_t out_rows = 14, out_cols = 14;
    LabeledDataset data;
    data.input_dim = out_rows * out_cols;
    for (std::size_t n = 0; n < images.size(); ++n) {
        const int lab = labels[n];
        if (lab != digit_a && lab != digit_b)
            continue;
        const auto small = resize_bilinear(images[n], rows, cols, out_rows, out_cols);
        BitVector in(data.input_dim);
        for (std::size_t d = 0; d < small.size(); ++d)
            if (small[d] > 127.5)
                in.set_bit(d, true);
        data.inputs.push_back(std::move(in));
        data.labels.push_back(lab == digit_b ? 1 : 0);
    }
    if (data.inputs.empty())
        throw std::runtime_error("binnn_digit_dataset: no examples of the chosen classes");
    return data;
}

BinnnProblem::BinnnProblem(BinNetShape shape, LabeledDataset train, LabeledDataset test)
    : shape_(shape), train_(std::move(train)), test_(std::move(test)) {
    if (shape_.input_dim == 0 || shape_.hidden == 0)
        throw std::invalid_argument("BinnnProblem: shape must have inputs and hidden units");
    check_dataset(shape_, train_);
    check_dataset(shape_, test_);
    if (train_.size() == 0)
        throw std::invalid_argument("BinnnProblem: empty training set");
}

BitVector BinnnProblem::sample_prior(RngStream& rng) const {
    return boltzmann_sample_prior(dim(), rng);
}

double BinnnProblem::chain_error(const BitVector& x) const {
    return binnn_error(shape_, x, train_);
}

double BinnnProblem::log_prior(const BitVector& x) const {
    if (x.dim() != dim())
        throw std::invalid_argument("BinnnProblem: weight vector dimension mismatch");
    return boltzmann_log_prior(x);
}

double BinnnProblem::simulate_distance(const BitVector& x, RngStream& rng) const {
    (void)rng;  // the training error is a deterministic simulator
    return binnn_error(shape_, x, train_);
}

}  // namespace binabc
