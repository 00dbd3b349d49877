#pragma once

#include <string>

#include "gdiff/schedule.hpp"
#include "gdiff/spectrum.hpp"

namespace gdiff {

// Law of the reverse-time initial state. All covariances involved share the
// data eigenbasis, so the law is described per eigenvalue:
//   stationary:         N(0, I)      -> c0 = 1
//   forward_at_horizon: N(0, Sigma_T) -> c0 = forward_eigenvalue(lambda, T)
//   custom:             fixed eigenvalue c0
enum class InitKind { kStationary, kForwardAtHorizon, kCustom };

struct InitLaw {
    InitKind kind = InitKind::kStationary;
    double custom_value = 1.0;

    static InitLaw stationary() { return InitLaw{InitKind::kStationary, 1.0}; }
    static InitLaw forward_at_horizon() {
        return InitLaw{InitKind::kForwardAtHorizon, 0.0};
    }
    static InitLaw custom(double c0);

    // Initial variance for the coordinate whose data eigenvalue is lambda.
    double eigenvalue(double lambda, const NoiseSchedule& sched) const;

    std::string label() const;  // "N0", "pT", or the custom value
};

// Variance at forward time s of one eigen-coordinate of the exact reverse
// SDE started at variance c0 at the horizon:
//   lambda_s + exp(-2(B_T - B_s)) lambda_s^2 lambda_T^{-2} (c0 - lambda_T).
double sde_marginal_eigenvalue(double lambda, double c0, double s,
                               const NoiseSchedule& sched);

// Same for the probability-flow ODE, whose solution map is linear:
//   (lambda_s / lambda_T) c0.
double ode_marginal_eigenvalue(double lambda, double c0, double s,
                               const NoiseSchedule& sched);

// The exact reverse SDE solution decomposes as
//   x_s = transport * x_horizon + noise,  noise ~ N(0, noise_var),
// with transport = exp(-(B_T - B_s)) lambda_s / lambda_T and
// noise_var = lambda_s - exp(-2(B_T - B_s)) lambda_s^2 / lambda_T.
double sde_transport_coefficient(double lambda, double s,
                                 const NoiseSchedule& sched);
double sde_noise_variance(double lambda, double s, const NoiseSchedule& sched);

// Marginal spectra of the two idealized generators started from N(0, I),
// index-paired with the input spectrum.
struct GenerativeMarginals {
    CovarianceSpectrum sde;
    CovarianceSpectrum ode;
};
GenerativeMarginals generative_marginals(const CovarianceSpectrum& spectrum,
                                         double s, const NoiseSchedule& sched);

}  // namespace gdiff
