#include "binabc/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace binabc {

ErrorSummary error_metrics(const Population& pop, const ChainErrorFn& chain_error) {
    if (!chain_error)
        throw std::invalid_argument("error_metrics: missing chain error function");
    ErrorSummary summary;
    summary.min = chain_error(pop[0]);
    double total = summary.min;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        const double e = chain_error(pop[i]);
        total += e;
        summary.min = std::min(summary.min, e);
    }
    summary.avg = total / static_cast<double>(pop.size());
    return summary;
}

std::string metrics_csv_header() {
    return "repeat,iteration,kernel,population,p_flip,avg_error,min_error,"
           "proposals,within_tolerance,accepted,epsilon";
}

std::string metrics_csv_row(const MetricsRow& row) {
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "%d,%lld,%s,%d,%.10g,%.10g,%.10g,%lld,%lld,%lld,%.10g",
                  row.repeat, static_cast<long long>(row.iteration),
                  std::string(kernel_kind_name(row.kernel)).c_str(), row.population,
                  row.flip_prob, row.avg_error, row.min_error,
                  static_cast<long long>(row.proposals),
                  static_cast<long long>(row.within_tolerance),
                  static_cast<long long>(row.accepted), row.epsilon_param);
    return buf;
}

MeanSe mean_se(const std::vector<double>& values) {
    if (values.empty())
        throw std::invalid_argument("mean_se: empty sample");
    MeanSe out;
    for (const double v : values)
        out.mean += v;
    out.mean /= static_cast<double>(values.size());
    if (values.size() == 1)
        return out;
    double ss = 0.0;
    for (const double v : values)
        ss += (v - out.mean) * (v - out.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(values.size()));
    return out;
}

}  // namespace binabc
