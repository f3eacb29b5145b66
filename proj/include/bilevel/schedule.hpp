// Stepsize schedules of the form base / (k+1)^exponent.

#ifndef BILEVEL_SCHEDULE_HPP
#define BILEVEL_SCHEDULE_HPP

#include <cmath>
#include <stdexcept>

namespace bilevel {

/// Nonincreasing stepsize sequence value(k) = base / (k+1)^exponent.
/// exponent = 0 gives a constant schedule; base = 0 gives the zero schedule.
template <class Scalar>
class StepSchedule {
 public:
  StepSchedule() = default;
  StepSchedule(Scalar base, Scalar exponent) : base_(base), exponent_(exponent) {
    if (base < Scalar(0) || exponent < Scalar(0))
      throw std::invalid_argument("StepSchedule: base and exponent must be nonnegative");
  }

  static StepSchedule constant(Scalar base) { return StepSchedule(base, Scalar(0)); }
  static StepSchedule zero() { return StepSchedule(Scalar(0), Scalar(0)); }

  Scalar operator()(long k) const {
    if (exponent_ == Scalar(0)) return base_;
    return base_ / std::pow(Scalar(k) + Scalar(1), exponent_);
  }

  Scalar base() const { return base_; }
  Scalar exponent() const { return exponent_; }

 private:
  Scalar base_ = 0;
  Scalar exponent_ = 0;
};

}  // namespace bilevel

#endif
