#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gdiff/fft.hpp"
#include "gdiff/ppm.hpp"
#include "gdiff/spectrum.hpp"

namespace gdiff {

// Normalized zero-mean kernel of the microtexture model:
//   t_c = (u_c - m_c) / sqrt(M N), one kernel per RGB channel, plus the
// removed channel means for reconstruction.
struct Texton {
    std::size_t rows = 0;  // M
    std::size_t cols = 0;  // N
    std::array<std::vector<double>, 3> channels;
    std::array<double, 3> means{0.0, 0.0, 0.0};
};

Texton texton_from_image(const Image& image);

// Nonzero part of the model's covariance spectrum: one eigenvalue per
// frequency, lambda(xi) = sum_c |that_c(xi)|^2, plus the zero eigenvalue
// with multiplicity 2MN (the two directions orthogonal to that(xi) at each
// frequency).
struct AdsnSpectrum {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> lambda1;  // rows*cols, row-major over (xi_row, xi_col)
    std::size_t zero_multiplicity = 0;

    double total() const;
};

AdsnSpectrum adsn_spectrum(const Texton& texton);

// All 3MN eigenvalues as a flat covariance spectrum (the per-frequency
// values plus the 2MN zeros), ready for the sampler/distance pipeline.
CovarianceSpectrum adsn_flat_spectrum(const AdsnSpectrum& spectrum);

// n zero-mean samples x_c = t_c * w with one shared scalar white-noise field
// per sample; sample k draws from the counter-based stream (seed, k).
// Adding the channel means back is post-processing (add_mean).
std::vector<Image> adsn_sample(const Texton& texton, std::uint64_t seed,
                               std::size_t n);
Image add_mean(const Image& sample, const Texton& texton);

// Orthonormal complex triple per frequency; the first vector is parallel to
// that(xi) whenever that(xi) != 0, and the canonical basis is used at
// degenerate frequencies.
struct FrequencyBasis {
    std::size_t rows = 0;
    std::size_t cols = 0;
    // vectors[f][j][c]: frequency f (row-major), basis vector j, channel c.
    std::vector<std::array<std::array<cplx, 3>, 3>> vectors;
};

FrequencyBasis frequency_basis(const Texton& texton);

// Per-frequency estimated eigenvalue triples.
struct EigenEstimates {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::array<double, 3>> triples;
};

// kUnbiased divides squared projections by MN (exact estimator);
// kOneThird divides by 3MN (compatibility with the printed constant).
enum class EstimatorNormalization { kUnbiased, kOneThird };

// lambda_hat_j(xi) = c/n sum_k |<v_j(xi), DFT(sample_k)(xi)>|^2 with the
// Hermitian inner product over channels.
EigenEstimates empirical_eigenvalues(
    const std::vector<Image>& samples, const FrequencyBasis& basis,
    EstimatorNormalization norm = EstimatorNormalization::kUnbiased);

// Same estimator fed with sample DFTs directly (one ComplexField per
// channel); lets callers bypass the spatial-domain representation.
EigenEstimates empirical_eigenvalues_from_dfts(
    const std::vector<std::array<ComplexField, 3>>& sample_dfts,
    const FrequencyBasis& basis,
    EstimatorNormalization norm = EstimatorNormalization::kUnbiased);

// Streaming variant: generates n exact samples on the fly (identical to
// empirical_eigenvalues over adsn_sample(texton, seed, n)) without storing
// them.
EigenEstimates estimate_exact_sampler(
    const Texton& texton, const FrequencyBasis& basis, std::uint64_t seed,
    std::size_t n,
    EstimatorNormalization norm = EstimatorNormalization::kUnbiased);

// Empirical distance to the model law:
//   sqrt( sum_xi (sqrt(l1_hat) - sqrt(lambda(xi)))^2 + l2_hat + l3_hat ).
double empirical_w2(const EigenEstimates& est, const AdsnSpectrum& ref);

// CSV contracts.
std::string adsn_spectrum_csv(const AdsnSpectrum& spectrum);
AdsnSpectrum load_adsn_spectrum(const std::string& path);
std::string estimates_csv(const EigenEstimates& est);
EigenEstimates load_estimates(const std::string& path);

}  // namespace gdiff
