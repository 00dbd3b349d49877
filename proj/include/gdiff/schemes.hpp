#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gdiff/exact.hpp"
#include "gdiff/schedule.hpp"
#include "gdiff/spectrum.hpp"

namespace gdiff {

// The four reverse-time integrators:
//   em:    Euler-Maruyama on the reverse SDE
//   ei:    exponential integrator on the reverse SDE (exact linear part)
//   euler: explicit Euler on the probability-flow ODE
//   heun:  Heun's two-stage method on the probability-flow ODE
enum class SchemeKind { kEm, kEi, kEuler, kHeun };

const char* scheme_name(SchemeKind kind);
SchemeKind scheme_from_name(const std::string& name);
bool scheme_is_stochastic(SchemeKind kind);

struct SamplerConfig {
    NoiseSchedule sched = NoiseSchedule::standard_linear();
    std::size_t steps = 1000;   // N
    double truncation = 1e-3;   // eps, integration stops at forward time eps
    InitLaw init = InitLaw::stationary();

    void validate() const;
};

// Uniform grid over backward time [0, T - eps]:
//   step    Delta = (T - eps)/N
//   backward[k] = k Delta            (backward[N] pinned to T - eps)
//   forward[k]  = T - backward[k]    (forward[0] = T, forward[N] pinned to eps)
struct TimeGrid {
    double step = 0.0;
    std::vector<double> backward;
    std::vector<double> forward;
};
TimeGrid time_grid(const SamplerConfig& cfg);

// Exact integrating-factor gains of the exponential integrator over
// [tau_to, tau_from] (forward times, tau_from > tau_to):
//   drift_gain = exp(B(tau_from) - B(tau_to)) - 1
//   noise_gain = (exp(2 B(tau_from) - 2 B(tau_to)) - 1) / 2
struct EiCoefficients {
    double drift_gain = 0.0;
    double noise_gain = 0.0;
};
EiCoefficients ei_coefficients(const NoiseSchedule& sched, double tau_from,
                               double tau_to);
EiCoefficients ei_coefficients(std::size_t k, const SamplerConfig& cfg);

// Variance of one eigen-coordinate along the scheme, values[k] after k steps
// (values[0] from the init law). Raises DegenerateScore when the score is
// required at a forward time where the forward variance vanishes (left
// endpoints for em/ei/euler; both endpoints for heun, including forward
// time eps).
struct EigenTrajectory {
    double lambda = 0.0;
    std::vector<double> values;
};
EigenTrajectory eigen_recursion(SchemeKind kind, double lambda,
                                const SamplerConfig& cfg);

// Recursion applied to a whole spectrum; row k holds the index-paired
// spectrum after k steps.
std::vector<std::vector<double>> spectrum_recursion(SchemeKind kind,
                                                    const CovarianceSpectrum& s,
                                                    const SamplerConfig& cfg);

// Streaming form: visit(k, row) is called for k = 0..N with the spectrum
// after k steps; only O(d) state is kept.
void spectrum_recursion_visit(
    SchemeKind kind, const CovarianceSpectrum& spectrum,
    const SamplerConfig& cfg,
    const std::function<void(std::size_t, const std::vector<double>&)>& visit);

// Per-step linear update of one eigen-coordinate, x <- mult x + noise_std z
// (noise_std = 0 for the deterministic schemes). For heun the two-stage
// pieces are kept so a simulation can run the literal dynamics:
//   x_half = x + delta g_left x
//   x_next = x + (delta/2) (g_left x + g_right x_half).
struct StepUpdate {
    double mult = 1.0;
    double noise_std = 0.0;
    double g_left = 0.0;
    double g_right = 0.0;
    double delta = 0.0;
};

// All N per-step updates of the scheme for one eigen-coordinate. Raises
// DegenerateScore up front if any required score evaluation is undefined.
std::vector<StepUpdate> scheme_step_updates(SchemeKind kind, double lambda,
                                            const SamplerConfig& cfg);

class NormalStream;  // rng.hpp

// One step of the literal scheme dynamics applied to state x; stochastic
// schemes draw their variate from stream.
double apply_step(SchemeKind kind, const StepUpdate& u, double x,
                  NormalStream& stream);

// Simulates n independent realizations of the scheme dynamics in the data
// eigenbasis and returns the final states (n x d). Variates come from
// counter-based per-sample streams derived from (seed, sample index), so the
// result is independent of worker partitioning.
SampleMatrix sample_paths(SchemeKind kind, const CovarianceSpectrum& spectrum,
                          const SamplerConfig& cfg, std::uint64_t seed,
                          std::size_t n_samples);

// CSV contract: header k,t,tau,lambda, one row per grid point.
std::string trajectory_csv(const EigenTrajectory& trajectory,
                           const SamplerConfig& cfg);

}  // namespace gdiff
