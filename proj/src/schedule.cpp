#include "gdiff/schedule.hpp"

#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"

namespace gdiff {

namespace {
void check_params(double beta_min, double beta_max, double horizon) {
    if (!(horizon > 0.0)) {
        throw DomainError("schedule: horizon must be positive, got " +
                          format_short(horizon));
    }
    if (!(beta_min > 0.0)) {
        throw DomainError("schedule: beta_min must be positive, got " +
                          format_short(beta_min));
    }
    if (!(beta_max >= beta_min)) {
        throw DomainError("schedule: beta_max must be >= beta_min");
    }
}
}  // namespace

NoiseSchedule NoiseSchedule::constant(double beta, double horizon) {
    check_params(beta, beta, horizon);
    return NoiseSchedule{BetaKind::kConstant, beta, beta, horizon};
}

NoiseSchedule NoiseSchedule::linear(double beta_min, double beta_max,
                                    double horizon) {
    check_params(beta_min, beta_max, horizon);
    return NoiseSchedule{BetaKind::kLinear, beta_min, beta_max, horizon};
}

NoiseSchedule NoiseSchedule::standard_linear() {
    return linear(0.05, 10.0, 1.0);
}

void NoiseSchedule::check_time(double t) const {
    if (!(t >= 0.0) || !(t <= horizon)) {
        throw DomainError("schedule: time " + format_short(t) +
                          " outside [0, " + format_short(horizon) + "]");
    }
}

double NoiseSchedule::beta(double t) const {
    check_time(t);
    if (kind == BetaKind::kConstant) return beta_min;
    return beta_min + (beta_max - beta_min) * (t / horizon);
}

double NoiseSchedule::beta_integral(double t) const {
    check_time(t);
    if (kind == BetaKind::kConstant) return beta_min * t;
    return beta_min * t + (beta_max - beta_min) * t * t / (2.0 * horizon);
}

std::string NoiseSchedule::describe() const {
    if (kind == BetaKind::kConstant) {
        return "constant beta=" + format_short(beta_min) +
               " T=" + format_short(horizon);
    }
    return "linear beta=" + format_short(beta_min) + ".." +
           format_short(beta_max) + " T=" + format_short(horizon);
}

}  // namespace gdiff
