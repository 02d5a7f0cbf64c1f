#pragma once

#include <memory>
#include <vector>

#include "binabc/harness/config.hpp"
#include "binabc/harness/metrics.hpp"
#include "binabc/population.hpp"
#include "binabc/problems/problem.hpp"
#include "binabc/rng.hpp"

namespace binabc {

/// One grid cell of an experiment: a kernel at one population size and one
/// flip probability.
struct RunPoint {
    KernelKind kernel = KernelKind::DdeMc;
    int population = 0;
    double flip_prob = 0.0;

    bool operator==(const RunPoint&) const = default;
};

/// Cartesian expansion kernels x population sizes x flip probabilities, in
/// configuration order (kernel-major).
std::vector<RunPoint> expand_runs(const ExperimentConfig& config);

struct RepeatResult {
    int repeat = 0;
    std::vector<MetricsRow> rows;  // one per recorded stride
    Population final_pop;
    std::vector<Population> ensemble_tail;  // last populations (binnn voting)
    std::int64_t proposals = 0;
    std::int64_t within_tolerance = 0;
    std::int64_t accepted = 0;
    double wall_ms = 0.0;
    std::shared_ptr<const Problem> problem;  // the instance this repeat ran on
};

struct PointResult {
    RunPoint point;
    std::vector<RepeatResult> repeats;
};

struct ExperimentOutput {
    ExperimentConfig config;
    std::vector<PointResult> points;
};

/// Run every grid cell for every repeat and keep results in memory.
/// Repeats run in parallel when workers > 1; results are deterministic
/// functions of (config, seed) either way.
ExperimentOutput execute_experiment(const ExperimentConfig& config);

/// Write one CSV per kernel plus a JSON summary into config.out_dir.
/// Identical (config, seed) pairs produce byte-identical files.
void write_experiment_outputs(const ExperimentOutput& output);

/// execute + write.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Stream addressing, shared between the runner and anything reproducing
/// its draws: the problem instance depends only on (seed, repeat), chain
/// initialization only on (seed, repeat), and the sweep stream on the full
/// grid cell, so paired comparisons across kernels and schedules see the
/// same instances.
RngStream instance_stream(std::uint64_t seed, int repeat);
RngStream dataset_stream(std::uint64_t seed);
RngStream init_stream(std::uint64_t seed, int repeat);
RngStream sweep_stream(std::uint64_t seed, const RunPoint& point, int repeat);

/// The problem a given repeat runs on (fresh instance for qmr, the shared
/// dataset or table otherwise).
std::shared_ptr<const Problem> build_problem(const ExperimentConfig& config, int repeat);

}  // namespace binabc
