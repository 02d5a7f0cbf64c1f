#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "binabc/bitvector.hpp"
#include "binabc/epsilon.hpp"
#include "binabc/kernels.hpp"
#include "binabc/population.hpp"
#include "binabc/rng.hpp"

namespace binabc {

/// Target with a tractable likelihood, scored in log space.
class LikelihoodTarget {
public:
    virtual ~LikelihoodTarget() = default;
    virtual double log_prior(const BitVector& x) const = 0;
    virtual double log_likelihood(const BitVector& x) const = 0;

    double log_posterior_unnorm(const BitVector& x) const {
        return log_prior(x) + log_likelihood(x);
    }
};

/// Likelihood-free target: a prior plus a stochastic simulator whose output
/// is scored as a distance to the held observed data. One call runs one
/// simulation and returns its distance.
class AbcTarget {
public:
    virtual ~AbcTarget() = default;
    virtual double log_prior(const BitVector& x) const = 0;
    virtual double simulate_distance(const BitVector& x, RngStream& rng) const = 0;
};

enum class StepOutcome {
    RejectedTolerance,   // simulated distance exceeded the tolerance
    RejectedMetropolis,  // tolerance passed (or not applicable), ratio lost
    Accepted,
};

struct StepResult {
    BitVector state;  // chain state after the step
    StepOutcome outcome = StepOutcome::RejectedMetropolis;
    double epsilon = 0.0;  // tolerance used; 0 for likelihood steps
};

/// min(1, exp(log_target_delta)).
double metropolis_accept_prob(double log_target_delta);

/// One Metropolis update of chain i against an exact log target. The
/// proposal density is taken as symmetric; run_* warns when it is not.
/// Throws std::domain_error when the current state's log target is not
/// finite, since the ratio is then meaningless.
StepResult metropolis_step(const LikelihoodTarget& target, const KernelSpec& spec,
                           std::size_t i, const Population& pop, RngStream& rng);

/// One likelihood-free update of chain i: propose, simulate once, compare
/// the distance against a fresh tolerance, and only then run the prior-ratio
/// Metropolis test. The Metropolis uniform is drawn only when the tolerance
/// gate passes, so rejected-by-tolerance steps consume no extra randomness
/// beyond the simulator's.
StepResult abc_step(const AbcTarget& target, const KernelSpec& spec,
                    const EpsilonSchedule& sched, std::size_t i, const Population& pop,
                    RngStream& rng);

/// Counters for one full pass over the population. For likelihood sweeps
/// the tolerance gate does not exist, so within_tolerance == proposals.
struct SweepStats {
    std::int64_t iteration = 0;
    std::int64_t proposals = 0;
    std::int64_t within_tolerance = 0;
    std::int64_t accepted = 0;
    std::vector<double> chain_errors;  // filled by run_* when requested
};

/// One sequential pass: chains updated in index order, each against the
/// population as already updated this sweep.
SweepStats sweep_likelihood(const LikelihoodTarget& target, const KernelSpec& spec,
                            Population& pop, RngStream& rng);
SweepStats sweep_abc(const AbcTarget& target, const KernelSpec& spec,
                     const EpsilonSchedule& sched, Population& pop, RngStream& rng);

/// Return false to stop the run early.
using SweepCallback = std::function<bool(const SweepStats&, const Population&)>;
using ChainErrorFn = std::function<double(const BitVector&)>;

struct RunOptions {
    std::int64_t iterations = 0;
    SweepCallback on_sweep;     // invoked after every sweep
    ChainErrorFn chain_error;   // optional per-chain metric for SweepStats
    std::int64_t error_stride = 1;  // evaluate chain_error every k-th sweep
};

/// Full population runs. A sweep counts as one iteration. The initial
/// population is the caller's to construct (normally prior draws); a zero
/// iteration budget returns it untouched. Failures from the target are
/// rethrown with chain and iteration context.
Population run_likelihood(const LikelihoodTarget& target, const KernelSpec& spec,
                          Population init, RngStream& rng, const RunOptions& opt);
Population run_abc(const AbcTarget& target, const KernelSpec& spec,
                   const EpsilonSchedule& sched, Population init, RngStream& rng,
                   const RunOptions& opt);

}  // namespace binabc
