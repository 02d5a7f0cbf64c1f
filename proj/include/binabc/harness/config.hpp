#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "binabc/epsilon.hpp"
#include "binabc/kernels.hpp"

namespace binabc {

/// Raised for malformed or semantically invalid configuration, with the
/// offending section and key named in the message.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunMode { Likelihood, Abc };
enum class ProblemKind { Qmr, Binnn, Nas };

std::string_view run_mode_name(RunMode mode);
RunMode run_mode_from_name(std::string_view name);
std::string_view problem_kind_name(ProblemKind kind);
ProblemKind problem_kind_from_name(std::string_view name);

struct QmrSettings {
    std::size_t diseases = 10;
    std::size_t findings = 20;
    double beta_a = 0.15;
    double beta_b = 0.15;
    std::size_t n_obs = 10;
    double prior_on = 0.5;

    bool operator==(const QmrSettings&) const = default;
};

struct BinnnSettings {
    std::size_t input_dim = 16;
    std::size_t hidden = 4;
    std::string source = "synthetic";  // synthetic | idx
    std::size_t train_size = 400;
    std::size_t test_size = 400;
    std::string train_images;
    std::string train_labels;
    std::string test_images;
    std::string test_labels;
    int digit_a = 0;
    int digit_b = 1;
    std::size_t ensemble_last = 5;  // populations kept per repeat for voting

    bool operator==(const BinnnSettings&) const = default;
};

struct NasSettings {
    std::string table_path;        // empty: synthesize
    std::uint64_t table_seed = 7;  // used when synthesizing

    bool operator==(const NasSettings&) const = default;
};

/// One experiment: a problem, a sweep grid of kernels / population sizes /
/// flip probabilities, and the run budget. Parsed from a flat
/// section-and-key text format; serialization is canonical, so equal
/// configs serialize to equal bytes.
struct ExperimentConfig {
    std::string name = "experiment";
    RunMode mode = RunMode::Abc;
    ProblemKind problem = ProblemKind::Qmr;
    int repeats = 1;
    std::int64_t iterations = 1000;
    std::int64_t stride = 100;
    std::uint64_t seed = 1;
    double burn_in = 0.5;
    std::string out_dir = ".";
    int workers = 1;

    std::vector<int> populations = {24};
    std::vector<KernelKind> kernels = {KernelKind::DdeMc};
    std::vector<double> flip_probs = {0.01};
    double mix_weight = 0.5;
    double theta = 0.5;

    EpsilonSchedule epsilon;

    QmrSettings qmr;
    BinnnSettings binnn;
    NasSettings nas;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// Hash of the canonical serialization; stamped into every output file.
std::uint64_t config_hash(const ExperimentConfig& config);

/// Semantic checks beyond syntax (ranges, cross-field constraints).
void validate_config(const ExperimentConfig& config);

/// The kernel spec for one grid cell.
KernelSpec kernel_spec_for(const ExperimentConfig& config, KernelKind kind,
                           double flip_prob);

}  // namespace binabc
