#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binabc/kernels.hpp"
#include "binabc/population.hpp"
#include "binabc/sampler.hpp"

namespace binabc {

struct ErrorSummary {
    double avg = 0.0;  // mean of the per-chain metric over the population
    double min = 0.0;  // best chain
};

ErrorSummary error_metrics(const Population& pop, const ChainErrorFn& chain_error);

/// One CSV record: the population state of one run at one recorded
/// iteration, by cumulative counters since the run began.
struct MetricsRow {
    int repeat = 0;
    std::int64_t iteration = 0;
    KernelKind kernel = KernelKind::DdeMc;
    int population = 0;
    double flip_prob = 0.0;
    double avg_error = 0.0;
    double min_error = 0.0;
    std::int64_t proposals = 0;
    std::int64_t within_tolerance = 0;
    std::int64_t accepted = 0;
    double epsilon_param = 0.0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRow& row);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;  // standard error: sample std over sqrt(n); 0 when n == 1
};

MeanSe mean_se(const std::vector<double>& values);

}  // namespace binabc
