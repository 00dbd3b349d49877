#include "gdiff/exact.hpp"

#include <cmath>

#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"

namespace gdiff {

InitLaw InitLaw::custom(double c0) {
    if (!(c0 >= 0.0)) {
        throw DomainError("init law: custom variance must be >= 0");
    }
    return InitLaw{InitKind::kCustom, c0};
}

double InitLaw::eigenvalue(double lambda, const NoiseSchedule& sched) const {
    switch (kind) {
        case InitKind::kStationary:
            return 1.0;
        case InitKind::kForwardAtHorizon:
            return forward_eigenvalue(lambda, sched.horizon, sched);
        case InitKind::kCustom:
            return custom_value;
    }
    return 1.0;
}

std::string InitLaw::label() const {
    switch (kind) {
        case InitKind::kStationary:
            return "N0";
        case InitKind::kForwardAtHorizon:
            return "pT";
        case InitKind::kCustom:
            return "c0=" + format_short(custom_value);
    }
    return "N0";
}

namespace {
void check_lambda(double lambda) {
    if (!(lambda >= 0.0)) {
        throw DomainError("marginal: lambda must be >= 0, got " +
                          format_short(lambda));
    }
}
void check_c0(double c0) {
    if (!(c0 >= 0.0)) {
        throw DomainError("marginal: initial variance must be >= 0, got " +
                          format_short(c0));
    }
}
}  // namespace

double sde_marginal_eigenvalue(double lambda, double c0, double s,
                               const NoiseSchedule& sched) {
    check_lambda(lambda);
    check_c0(c0);
    double b_s = sched.beta_integral(s);
    double b_horizon = sched.beta_integral(sched.horizon);
    double lam_s = forward_eigenvalue(lambda, s, sched);
    double lam_horizon = forward_eigenvalue(lambda, sched.horizon, sched);
    double decay = std::exp(-2.0 * (b_horizon - b_s));
    return lam_s + decay * lam_s * lam_s / (lam_horizon * lam_horizon) *
                       (c0 - lam_horizon);
}

double ode_marginal_eigenvalue(double lambda, double c0, double s,
                               const NoiseSchedule& sched) {
    check_lambda(lambda);
    check_c0(c0);
    double lam_s = forward_eigenvalue(lambda, s, sched);
    double lam_horizon = forward_eigenvalue(lambda, sched.horizon, sched);
    return lam_s / lam_horizon * c0;
}

double sde_transport_coefficient(double lambda, double s,
                                 const NoiseSchedule& sched) {
    check_lambda(lambda);
    double b_s = sched.beta_integral(s);
    double b_horizon = sched.beta_integral(sched.horizon);
    double lam_s = forward_eigenvalue(lambda, s, sched);
    double lam_horizon = forward_eigenvalue(lambda, sched.horizon, sched);
    return std::exp(-(b_horizon - b_s)) * lam_s / lam_horizon;
}

double sde_noise_variance(double lambda, double s, const NoiseSchedule& sched) {
    check_lambda(lambda);
    double b_s = sched.beta_integral(s);
    double b_horizon = sched.beta_integral(sched.horizon);
    double lam_s = forward_eigenvalue(lambda, s, sched);
    double lam_horizon = forward_eigenvalue(lambda, sched.horizon, sched);
    double v =
        lam_s - std::exp(-2.0 * (b_horizon - b_s)) * lam_s * lam_s / lam_horizon;
    // Mathematically >= 0; clip solver-level roundoff.
    return v < 0.0 ? 0.0 : v;
}

GenerativeMarginals generative_marginals(const CovarianceSpectrum& spectrum,
                                         double s, const NoiseSchedule& sched) {
    std::vector<double> sde(spectrum.dim());
    std::vector<double> ode(spectrum.dim());
    for (std::size_t i = 0; i < spectrum.dim(); ++i) {
        sde[i] = sde_marginal_eigenvalue(spectrum.values[i], 1.0, s, sched);
        ode[i] = ode_marginal_eigenvalue(spectrum.values[i], 1.0, s, sched);
    }
    return GenerativeMarginals{
        CovarianceSpectrum::from_ordered(std::move(sde)),
        CovarianceSpectrum::from_ordered(std::move(ode))};
}

}  // namespace gdiff
