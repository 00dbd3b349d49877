#pragma once

#include <string>

namespace gdiff {

enum class BetaKind { kConstant, kLinear };

// Time-dependent drift coefficient of the forward noising process on [0, T],
// with its running integral in closed form:
//   constant: beta(t) = b,                 integral = b t
//   linear:   beta(t) = b0 + (b1-b0) t/T,  integral = b0 t + (b1-b0) t^2/(2T)
struct NoiseSchedule {
    BetaKind kind = BetaKind::kLinear;
    double beta_min = 0.05;
    double beta_max = 10.0;
    double horizon = 1.0;  // T

    static NoiseSchedule constant(double beta, double horizon);
    static NoiseSchedule linear(double beta_min, double beta_max,
                                double horizon);
    // The conventional image-model schedule: linear 0.05 -> 10 over [0, 1].
    static NoiseSchedule standard_linear();

    double beta(double t) const;
    double beta_integral(double t) const;

    std::string describe() const;

  private:
    void check_time(double t) const;
};

}  // namespace gdiff
