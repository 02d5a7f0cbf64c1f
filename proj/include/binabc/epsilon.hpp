#pragma once

#include "binabc/rng.hpp"

namespace binabc {

/// Tolerance policy for accept/reject against the simulator distance:
/// either one fixed value, or a fresh exponential draw per proposal.
/// Exponential schedules are parameterized by their mean.
struct EpsilonSchedule {
    enum class Mode { Fixed, ExpSampled };

    Mode mode = Mode::Fixed;
    double value = 1.0;  // Fixed: the tolerance itself
    double mean = 1.0;   // ExpSampled: mean of the exponential

    static EpsilonSchedule fixed(double value);
    static EpsilonSchedule exp_mean(double mean);
    static EpsilonSchedule exp_rate(double rate);

    /// The single scalar that identifies this schedule in reports.
    double param() const { return mode == Mode::Fixed ? value : mean; }

    void validate() const;

    bool operator==(const EpsilonSchedule&) const = default;
};

/// One tolerance value. Fixed schedules consume no randomness; sampled
/// schedules consume exactly one draw and return a strictly positive value.
double epsilon_draw(const EpsilonSchedule& sched, RngStream& rng);

}  // namespace binabc
