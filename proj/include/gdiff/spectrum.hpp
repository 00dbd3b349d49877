#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdiff/schedule.hpp"

namespace gdiff {

// Eigenvalues of a data covariance, all >= 0. Every spectrum derived from a
// given source (forward-noised, sampler output, generative marginal) shares
// its eigenbasis, so entries are paired by index throughout; ingestion sorts
// descending once to fix a stable order.
struct CovarianceSpectrum {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }

    // Validates nonnegativity and sorts descending.
    static CovarianceSpectrum from_values(std::vector<double> values);
    // Keeps the given order (used for index-paired derived spectra whose
    // basis alignment must not be disturbed). Still validates nonnegativity.
    static CovarianceSpectrum from_ordered(std::vector<double> values);
};

// n samples of dimension d, row-major.
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    static SampleMatrix zeros(std::size_t rows, std::size_t cols);
};

// One eigenvalue per line, full round-trip precision.
CovarianceSpectrum load_spectrum(const std::string& path);
void save_spectrum(const std::string& path, const CovarianceSpectrum& spectrum);

// Comma-separated rows, one sample per line.
SampleMatrix load_samples(const std::string& path);
void save_samples(const std::string& path, const SampleMatrix& samples);

// All eigenvalues of a dense symmetric matrix (row-major, dim x dim) by
// cyclic Jacobi rotations. Converges when the off-diagonal Frobenius norm
// drops below 1e-12 times the matrix Frobenius norm; raises NumericError
// after 100 sweeps without convergence. Values within -1e-12 of zero are
// clamped to 0. Sorted descending.
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix,
                                          std::size_t dim);

// Eigenvalues of the centered empirical covariance (1/n) sum (x-m)(x-m)^T,
// where m is the per-coordinate sample mean.
CovarianceSpectrum empirical_spectrum(const SampleMatrix& samples);

enum class SynthKind { kSingle, kGeometric, kLogUniform };

// single:     d copies of lambda_max (isotropic)
// geometric:  lambda_max down to lambda_min in a geometric progression
// loguniform: log(lambda) uniform on [log lambda_min, log lambda_max],
//             deterministic in seed, sorted descending
CovarianceSpectrum synthetic_spectrum(SynthKind kind, std::size_t d,
                                      double lambda_min, double lambda_max,
                                      std::uint64_t seed);

// Forward noising of one eigenvalue to time t:
//   exp(-2 B(t)) lambda + (1 - exp(-2 B(t))).
double forward_eigenvalue(double lambda, double t, const NoiseSchedule& sched);

// Same map applied to a whole spectrum; preserves dimension and order.
CovarianceSpectrum forward_spectrum(const CovarianceSpectrum& spectrum,
                                    double t, const NoiseSchedule& sched);

}  // namespace gdiff
