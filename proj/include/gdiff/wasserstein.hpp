#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gdiff/exact.hpp"
#include "gdiff/schemes.hpp"
#include "gdiff/spectrum.hpp"

namespace gdiff {

// 2-Wasserstein distance between centered Gaussians that share an eigenbasis
// with index-paired eigenvalues: sqrt(sum_i (sqrt(a_i) - sqrt(b_i))^2).
double w2_diag(const CovarianceSpectrum& a, const CovarianceSpectrum& b);

// A marginal-law source: one of the two idealized continuous generators or
// one of the four discretization schemes.
enum class SourceKind { kSde, kOde, kEm, kEi, kEuler, kHeun };

const char* source_name(SourceKind source);
SourceKind source_from_name(const std::string& name);
bool source_is_continuous(SourceKind source);
// The idealized process a scheme discretizes (em/ei -> sde, euler/heun -> ode).
SourceKind continuous_counterpart(SchemeKind kind);
SchemeKind scheme_of_source(SourceKind source);

// Marginal spectrum of a continuous source at forward time s, one eigenvalue
// per data eigenvalue, with the reverse process started from cfg-init.
CovarianceSpectrum continuous_marginal_spectrum(SourceKind source,
                                                const CovarianceSpectrum& data,
                                                double s,
                                                const NoiseSchedule& sched,
                                                const InitLaw& init);

struct ErrorCurve {
    std::string label;
    std::vector<double> times;   // forward times tau_k
    std::vector<double> values;  // W2(source at tau_k, forward at tau_k)
};

// W2 between the source's marginal and the forward marginal on the sampler
// grid. Continuous sources evaluate their closed-form marginal at each tau_k
// (the grid only sets plotting resolution); schemes run their recursion.
ErrorCurve error_curve(SourceKind source, const CovarianceSpectrum& data,
                       const SamplerConfig& cfg);

struct AblationCell {
    SchemeKind scheme = SchemeKind::kEm;
    bool continuous = false;  // rendered as N="continuous"
    std::size_t steps = 0;    // N when !continuous
    double eps = 0.0;
    std::string init_label;
    bool defined = true;  // false when the score degenerates (printed "undefined")
    double w2 = 0.0;
};

// Final-time W2 against the data law N(0, Sigma) for every combination of
// scheme x (continuous + N_list) x eps_list x init_list.
std::vector<AblationCell> ablation_table(const CovarianceSpectrum& data,
                                         const std::vector<SchemeKind>& schemes,
                                         const std::vector<std::size_t>& n_list,
                                         const std::vector<double>& eps_list,
                                         const std::vector<InitLaw>& inits,
                                         const NoiseSchedule& sched);

struct ContributionPoint {
    double lambda = 0.0;
    bool defined = true;
    double value = 0.0;  // |sqrt(lambda) - sqrt(final source eigenvalue)|
};

// Per-eigenvalue contribution to the final-time Wasserstein error, one point
// per lambda. Points where the score degenerates are reported as undefined.
std::vector<ContributionPoint> eigen_contribution(
    SourceKind source, const std::vector<double>& lambda_grid,
    const SamplerConfig& cfg);

// Per-coordinate empirical second moments (mean assumed 0) of samples living
// in the shared eigenbasis; coordinate order is preserved so the result stays
// index-paired with the data spectrum.
CovarianceSpectrum empirical_spectrum_in_basis(const SampleMatrix& samples);

// CSV renderings (headers per the documented file contracts).
std::string curve_csv(const ErrorCurve& curve);
std::string curves_csv(const std::vector<ErrorCurve>& curves);
std::string table_csv(const std::vector<AblationCell>& cells);
std::string contribution_csv(const std::vector<ContributionPoint>& points);

}  // namespace gdiff
