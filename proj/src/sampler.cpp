#include "binabc/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace binabc {

double metropolis_accept_prob(double log_target_delta) {
    if (log_target_delta >= 0.0)
        return 1.0;
    return std::exp(log_target_delta);
}

StepResult metropolis_step(const LikelihoodTarget& target, const KernelSpec& spec,
                           std::size_t i, const Population& pop, RngStream& rng) {
    const BitVector& x = pop[i];
    const double current = target.log_posterior_unnorm(x);
    if (!std::isfinite(current))
        throw std::domain_error("metropolis_step: log target not finite at current state");

    BitVector proposal = propose(spec, i, pop, rng);
    const double candidate = target.log_posterior_unnorm(proposal);
    const double alpha = metropolis_accept_prob(candidate - current);
    if (rng.next_double() < alpha)
        return {std::move(proposal), StepOutcome::Accepted, 0.0};
    return {x, StepOutcome::RejectedMetropolis, 0.0};
}

StepResult abc_step(const AbcTarget& target, const KernelSpec& spec,
                    const EpsilonSchedule& sched, std::size_t i, const Population& pop,
                    RngStream& rng) {
    const BitVector& x = pop[i];
    BitVector proposal = propose(spec, i, pop, rng);
    const double dist = target.simulate_distance(proposal, rng);
    const double eps = epsilon_draw(sched, rng);
    if (!(dist <= eps))
        return {x, StepOutcome::RejectedTolerance, eps};

    const double current_lp = target.log_prior(x);
    if (!std::isfinite(current_lp))
        throw std::domain_error("abc_step: log prior not finite at current state");
    const double alpha = metropolis_accept_prob(target.log_prior(proposal) - current_lp);
    if (rng.next_double() < alpha)
        return {std::move(proposal), StepOutcome::Accepted, eps};
    return {x, StepOutcome::RejectedMetropolis, eps};
}

namespace {

void tally(SweepStats& stats, Population& pop, std::size_t i, StepResult r) {
    stats.proposals += 1;
    if (r.outcome != StepOutcome::RejectedTolerance)
        stats.within_tolerance += 1;
    if (r.outcome == StepOutcome::Accepted) {
        stats.accepted += 1;
        pop.set(i, std::move(r.state));
    }
}

[[noreturn]] void rethrow_with_chain(std::size_t i, const std::exception& e) {
    throw std::runtime_error("chain " + std::to_string(i) + ": " + e.what());
}

template <typename StepFn>
SweepStats sweep_impl(Population& pop, StepFn&& step) {
    SweepStats stats;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        try {
            tally(stats, pop, i, step(i));
        } catch (const std::exception& e) {
            rethrow_with_chain(i, e);
        }
    }
    return stats;
}

template <typename SweepFn>
void run_impl(const char* name, const KernelSpec& spec, Population& pop,
              const RunOptions& opt, SweepFn&& do_sweep) {
    if (opt.iterations < 0)
        throw std::invalid_argument(std::string(name) + ": negative iteration budget");
    spec.validate();
    if (!spec.symmetric())
        std::fprintf(stderr,
                     "warning: %s: kernel %s is not a symmetric proposal; "
                     "acceptance ratios assume symmetry\n",
                     name, std::string(kernel_kind_name(spec.kind)).c_str());

    for (std::int64_t t = 1; t <= opt.iterations; ++t) {
        SweepStats stats;
        try {
            stats = do_sweep();
        } catch (const std::exception& e) {
            throw std::runtime_error("iteration " + std::to_string(t) + ": " + e.what());
        }
        stats.iteration = t;
        if (opt.chain_error && opt.error_stride > 0 && t % opt.error_stride == 0) {
            stats.chain_errors.reserve(pop.size());
            for (const auto& chain : pop)
                stats.chain_errors.push_back(opt.chain_error(chain));
        }
        if (opt.on_sweep && !opt.on_sweep(stats, pop))
            break;
    }
}

}  // namespace

SweepStats sweep_likelihood(const LikelihoodTarget& target, const KernelSpec& spec,
                            Population& pop, RngStream& rng) {
    SweepStats stats = sweep_impl(
        pop, [&](std::size_t i) { return metropolis_step(target, spec, i, pop, rng); });
    stats.within_tolerance = stats.proposals;  // no tolerance gate in this mode
    return stats;
}

SweepStats sweep_abc(const AbcTarget& target, const KernelSpec& spec,
                     const EpsilonSchedule& sched, Population& pop, RngStream& rng) {
    sched.validate();
    return sweep_impl(
        pop, [&](std::size_t i) { return abc_step(target, spec, sched, i, pop, rng); });
}

Population run_likelihood(const LikelihoodTarget& target, const KernelSpec& spec,
                          Population init, RngStream& rng, const RunOptions& opt) {
    Population pop = std::move(init);
    run_impl("run_likelihood", spec, pop, opt,
             [&]() { return sweep_likelihood(target, spec, pop, rng); });
    return pop;
}

Population run_abc(const AbcTarget& target, const KernelSpec& spec,
                   const EpsilonSchedule& sched, Population init, RngStream& rng,
                   const RunOptions& opt) {
    Population pop = std::move(init);
    run_impl("run_abc", spec, pop, opt,
             [&]() { return sweep_abc(target, spec, sched, pop, rng); });
    return pop;
}

}  // namespace binabc
