#include "binabc/epsilon.hpp"

#include <cmath>
#include <stdexcept>

namespace binabc {

EpsilonSchedule EpsilonSchedule::fixed(double value) {
    EpsilonSchedule s;
    s.mode = Mode::Fixed;
    s.value = value;
    s.validate();
    return s;
}

EpsilonSchedule EpsilonSchedule::exp_mean(double mean) {
    EpsilonSchedule s;
    s.mode = Mode::ExpSampled;
    s.mean = mean;
    s.validate();
    return s;
}

EpsilonSchedule EpsilonSchedule::exp_rate(double rate) {
    if (!(rate > 0.0))
        throw std::invalid_argument("epsilon: rate must be positive");
    return exp_mean(1.0 / rate);
}

void EpsilonSchedule::validate() const {
    if (mode == Mode::Fixed) {
        if (!(value >= 0.0))
            throw std::invalid_argument("epsilon: fixed value must be non-negative");
    } else {
        if (!(mean > 0.0))
            throw std::invalid_argument("epsilon: exponential mean must be positive");
    }
}

double epsilon_draw(const EpsilonSchedule& sched, RngStream& rng) {
    if (sched.mode == EpsilonSchedule::Mode::Fixed)
        return sched.value;
    return -sched.mean * std::log(rng.next_open01());
}

}  // namespace binabc
