#include "binabc/harness/reports.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace binabc {

EnsembleReport ensemble_report(const BinnnProblem& problem, const PointResult& point) {
    const BinNetShape& shape = problem.shape();
    const LabeledDataset& test = problem.test();

    EnsembleReport report;
    std::vector<BitVector> pooled;
    std::vector<double> per_repeat;
    for (const RepeatResult& repeat : point.repeats) {
        std::vector<BitVector> models;
        for (const Population& pop : repeat.ensemble_tail)
            for (const BitVector& chain : pop)
                models.push_back(chain);
        if (models.empty())
            continue;
        per_repeat.push_back(ensemble_vote(shape, models, test));
        pooled.insert(pooled.end(), models.begin(), models.end());
    }
    if (pooled.empty())
        throw std::invalid_argument("ensemble_report: no models accumulated");

    report.model_count = pooled.size();
    report.pooled_vote_error = ensemble_vote(shape, pooled, test);
    report.best_single_error = std::numeric_limits<double>::infinity();
    for (const BitVector& model : pooled)
        report.best_single_error =
            std::min(report.best_single_error, binnn_error(shape, model, test));
    report.per_repeat_vote = mean_se(per_repeat);
    return report;
}

std::vector<PosteriorRepeatReport> posterior_report(const PointResult& point,
                                                    std::size_t max_enum_bits) {
    std::vector<PosteriorRepeatReport> reports;
    for (const RepeatResult& repeat : point.repeats) {
        if (!repeat.problem)
            throw std::invalid_argument("posterior_report: repeat has no problem");
        const LikelihoodTarget* target = repeat.problem->likelihood_target();
        if (target == nullptr)
            throw std::invalid_argument(
                "posterior_report: problem has no tractable likelihood");

        PosteriorRepeatReport report;
        report.repeat = repeat.repeat;
        for (const BitVector& chain : repeat.final_pop)
            report.chain_neg_log_posterior.push_back(-target->log_posterior_unnorm(chain));

        const std::size_t dim = repeat.problem->dim();
        if (dim <= max_enum_bits) {
            double best = -std::numeric_limits<double>::infinity();
            const std::size_t count = std::size_t{1} << dim;
            for (std::size_t s = 0; s < count; ++s) {
                BitVector x(dim);
                for (std::size_t d = 0; d < dim; ++d)
                    if ((s >> d) & 1u)
                        x.set_bit(d, true);
                best = std::max(best, target->log_posterior_unnorm(x));
            }
            report.exact_map_neg_log = -best;
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace binabc
