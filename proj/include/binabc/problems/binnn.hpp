#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "binabc/bitvector.hpp"
#include "binabc/population.hpp"
#include "binabc/problems/problem.hpp"
#include "binabc/rng.hpp"

namespace binabc {

/// Single-hidden-layer classifier whose weights and activations live in
/// {-1, +1}, encoded as bits (0 is -1, 1 is +1). No bias terms. The weight
/// vector lays out the first layer row-major (hidden unit j, input d at bit
/// j * input_dim + d), then the output weights.
struct BinNetShape {
    std::size_t input_dim = 0;
    std::size_t hidden = 0;

    std::size_t weight_count() const { return input_dim * hidden + hidden; }
};

/// Binary examples: input bit d is +1 when set, labels are 0/1.
struct LabeledDataset {
    std::size_t input_dim = 0;
    std::vector<BitVector> inputs;
    std::vector<std::uint8_t> labels;

    std::size_t size() const { return inputs.size(); }
};

/// Hard threshold forward pass; every sign tie resolves to +1. Returns the
/// predicted label, 0 or 1.
int binnn_predict(const BinNetShape& shape, const BitVector& weights,
                  const BitVector& input);

/// Misclassification fraction of one weight vector over a dataset.
double binnn_error(const BinNetShape& shape, const BitVector& weights,
                   const LabeledDataset& data);

/// Misclassification fraction of the majority vote over a set of weight
/// vectors; vote ties resolve to label 1.
double ensemble_vote(const BinNetShape& shape, const std::vector<BitVector>& models,
                     const LabeledDataset& data);

/// Linearly separable polar set: inputs cluster around a random hidden plane
/// vector and its complement (per-bit noise 0.15), labels by proximity to the
/// plane, so zero training error is attainable and points carry a margin.
LabeledDataset binnn_synthetic_dataset(std::size_t input_dim, std::size_t count,
                                       RngStream& rng);

/// IDX-format loaders (big-endian magic + dims), the common handwritten
/// digit encoding.
std::vector<std::vector<std::uint8_t>> idx_load_images(const std::string& path,
                                                       std::size_t& rows,
                                                       std::size_t& cols);
std::vector<std::uint8_t> idx_load_labels(const std::string& path);

/// Two-class digit dataset: keep digit_a (label 0) and digit_b (label 1),
/// downscale each image bilinearly to 14x14, binarize at half intensity.
LabeledDataset binnn_digit_dataset(const std::string& images_path,
                                   const std::string& labels_path, int digit_a,
                                   int digit_b);

/// Harness adapter. The simulator is deterministic: the distance is the
/// training misclassification fraction itself. The prior favors sparse
/// (mostly -1) weights through the low-complexity Boltzmann form.
class BinnnProblem final : public Problem {
public:
    BinnnProblem(BinNetShape shape, LabeledDataset train, LabeledDataset test);

    std::size_t dim() const override { return shape_.weight_count(); }
    BitVector sample_prior(RngStream& rng) const override;
    double chain_error(const BitVector& x) const override;

    double log_prior(const BitVector& x) const override;
    double simulate_distance(const BitVector& x, RngStream& rng) const override;

    const BinNetShape& shape() const { return shape_; }
    const LabeledDataset& train() const { return train_; }
    const LabeledDataset& test() const { return test_; }

private:
    BinNetShape shape_;
    LabeledDataset train_;
    LabeledDataset test_;
};

}  // namespace binabc
