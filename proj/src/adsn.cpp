#include "gdiff/adsn.hpp"

#include <cmath>

#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"
#include "gdiff/parallel.hpp"
#include "gdiff/rng.hpp"

namespace gdiff {

Texton texton_from_image(const Image& image) {
    if (image.rows == 0 || image.cols == 0) {
        throw DomainError("texton: empty image");
    }
    for (const auto& ch : image.channels) {
        if (ch.size() != image.rows * image.cols) {
            throw DomainError("texton: input must carry 3 full channels");
        }
    }
    const double count = static_cast<double>(image.rows * image.cols);
    const double scale = 1.0 / std::sqrt(count);
    Texton t;
    t.rows = image.rows;
    t.cols = image.cols;
    for (std::size_t c = 0; c < 3; ++c) {
        double mean = 0.0;
        for (double v : image.channels[c]) mean += v;
        mean /= count;
        t.means[c] = mean;
        t.channels[c].resize(image.channels[c].size());
        for (std::size_t p = 0; p < image.channels[c].size(); ++p) {
            t.channels[c][p] = (image.channels[c][p] - mean) * scale;
        }
    }
    return t;
}

double AdsnSpectrum::total() const {
    double s = 0.0;
    for (double v : lambda1) s += v;
    return s;
}

AdsnSpectrum adsn_spectrum(const Texton& texton) {
    AdsnSpectrum spec;
    spec.rows = texton.rows;
    spec.cols = texton.cols;
    spec.lambda1.assign(texton.rows * texton.cols, 0.0);
    spec.zero_multiplicity = 2 * texton.rows * texton.cols;
    for (std::size_t c = 0; c < 3; ++c) {
        ComplexField f =
            dft2_of_real(texton.channels[c], texton.rows, texton.cols);
        for (std::size_t p = 0; p < spec.lambda1.size(); ++p) {
            spec.lambda1[p] += std::norm(f.data[p]);
        }
    }
    // The texton channel sums are zero by construction, so the (0,0)
    // eigenvalue is exactly 0; pin it against summation roundoff.
    spec.lambda1[0] = 0.0;
    return spec;
}

CovarianceSpectrum adsn_flat_spectrum(const AdsnSpectrum& spectrum) {
    std::vector<double> values = spectrum.lambda1;
    values.resize(values.size() + spectrum.zero_multiplicity, 0.0);
    return CovarianceSpectrum::from_values(std::move(values));
}

std::vector<Image> adsn_sample(const Texton& texton, std::uint64_t seed,
                               std::size_t n) {
    const std::size_t rows = texton.rows;
    const std::size_t cols = texton.cols;
    const std::size_t pixels = rows * cols;

    std::array<ComplexField, 3> kernel_hat;
    for (std::size_t c = 0; c < 3; ++c) {
        kernel_hat[c] = dft2_of_real(texton.channels[c], rows, cols);
    }

    std::vector<Image> out(n);
    parallel_for(n, [&](std::size_t k) {
        // One scalar white-noise field shared across the three channels.
        NormalStream stream(seed, k);
        ComplexField noise_hat = ComplexField::zeros(rows, cols);
        for (std::size_t p = 0; p < pixels; ++p) {
            noise_hat.data[p] = cplx{stream.next(), 0.0};
        }
        dft2(noise_hat, /*inverse=*/false);

        Image sample = Image::zeros(rows, cols);
        for (std::size_t c = 0; c < 3; ++c) {
            ComplexField prod = ComplexField::zeros(rows, cols);
            for (std::size_t p = 0; p < pixels; ++p) {
                prod.data[p] = kernel_hat[c].data[p] * noise_hat.data[p];
            }
            dft2(prod, /*inverse=*/true);
            for (std::size_t p = 0; p < pixels; ++p) {
                sample.channels[c][p] = prod.data[p].real();
            }
        }
        out[k] = std::move(sample);
    });
    return out;
}

Image add_mean(const Image& sample, const Texton& texton) {
    Image out = sample;
    for (std::size_t c = 0; c < 3; ++c) {
        for (double& v : out.channels[c]) v += texton.means[c];
    }
    return out;
}

namespace {

using Triple = std::array<cplx, 3>;

cplx hdot(const Triple& a, const Triple& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] +
           std::conj(a[2]) * b[2];
}

double norm2(const Triple& a) { return hdot(a, a).real(); }

// Completes {v1} to an orthonormal triple by modified Gram-Schmidt over the
// candidate list, falling back to canonical axis vectors when a candidate
// is (numerically) dependent.
std::array<Triple, 3> orthonormal_triple(const Triple& v1,
                                         const std::vector<Triple>& candidates) {
    std::array<Triple, 3> basis;
    basis[0] = v1;
    std::size_t have = 1;
    for (const Triple& cand : candidates) {
        if (have == 3) break;
        Triple w = cand;
        for (std::size_t b = 0; b < have; ++b) {
            cplx proj = hdot(basis[b], w);
            for (std::size_t c = 0; c < 3; ++c) w[c] -= proj * basis[b][c];
        }
        double n2 = norm2(w);
        double cand_n2 = norm2(cand);
        if (n2 > 1e-20 * (cand_n2 + 1.0)) {
            double inv = 1.0 / std::sqrt(n2);
            for (cplx& z : w) z *= inv;
            basis[have++] = w;
        }
    }
    if (have != 3) {
        throw NumericError("frequency basis: failed to complete triple");
    }
    return basis;
}

const std::array<Triple, 3> kCanonical = {
    Triple{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}},
    Triple{cplx{0, 0}, cplx{1, 0}, cplx{0, 0}},
    Triple{cplx{0, 0}, cplx{0, 0}, cplx{1, 0}},
};

}  // namespace

FrequencyBasis frequency_basis(const Texton& texton) {
    const std::size_t rows = texton.rows;
    const std::size_t cols = texton.cols;
    std::array<ComplexField, 3> kernel_hat;
    for (std::size_t c = 0; c < 3; ++c) {
        kernel_hat[c] = dft2_of_real(texton.channels[c], rows, cols);
    }

    FrequencyBasis basis;
    basis.rows = rows;
    basis.cols = cols;
    basis.vectors.resize(rows * cols);
    parallel_for(rows * cols, [&](std::size_t p) {
        Triple th{kernel_hat[0].data[p], kernel_hat[1].data[p],
                  kernel_hat[2].data[p]};
        double n2 = norm2(th);
        if (n2 == 0.0) {
            basis.vectors[p] = kCanonical;
            return;
        }
        double inv = 1.0 / std::sqrt(n2);
        Triple v1{th[0] * inv, th[1] * inv, th[2] * inv};
        // Candidate completions orthogonal to th by construction, then the
        // canonical axes to cover their degenerate cases.
        std::vector<Triple> candidates = {
            Triple{-std::conj(th[2]), cplx{0, 0}, std::conj(th[0])},
            Triple{cplx{0, 0}, -std::conj(th[2]), std::conj(th[1])},
            kCanonical[0], kCanonical[1], kCanonical[2]};
        basis.vectors[p] = orthonormal_triple(v1, candidates);
    });
    return basis;
}

namespace {

double estimator_constant(std::size_t rows, std::size_t cols,
                          EstimatorNormalization norm) {
    double mn = static_cast<double>(rows) * static_cast<double>(cols);
    return norm == EstimatorNormalization::kUnbiased ? 1.0 / mn
                                                     : 1.0 / (3.0 * mn);
}

}  // namespace

EigenEstimates empirical_eigenvalues_from_dfts(
    const std::vector<std::array<ComplexField, 3>>& sample_dfts,
    const FrequencyBasis& basis, EstimatorNormalization norm) {
    if (sample_dfts.empty()) {
        throw DomainError("estimator: need at least one sample");
    }
    const std::size_t rows = basis.rows;
    const std::size_t cols = basis.cols;
    const std::size_t freqs = rows * cols;
    for (const auto& s : sample_dfts) {
        for (const ComplexField& ch : s) {
            if (ch.rows != rows || ch.cols != cols) {
                throw DomainError("estimator: sample shape mismatch");
            }
        }
    }

    std::vector<double> sums(freqs * 3, 0.0);
    blocked_accumulate(
        sample_dfts.size(), freqs * 3,
        [&](std::size_t k, double* acc) {
            const std::array<ComplexField, 3>& s = sample_dfts[k];
            for (std::size_t p = 0; p < freqs; ++p) {
                Triple y{s[0].data[p], s[1].data[p], s[2].data[p]};
                for (std::size_t j = 0; j < 3; ++j) {
                    acc[p * 3 + j] += std::norm(hdot(basis.vectors[p][j], y));
                }
            }
        },
        sums.data());

    const double c = estimator_constant(rows, cols, norm);
    const double inv_n = 1.0 / static_cast<double>(sample_dfts.size());
    EigenEstimates est;
    est.rows = rows;
    est.cols = cols;
    est.triples.resize(freqs);
    for (std::size_t p = 0; p < freqs; ++p) {
        for (std::size_t j = 0; j < 3; ++j) {
            est.triples[p][j] = c * inv_n * sums[p * 3 + j];
        }
    }
    return est;
}

EigenEstimates empirical_eigenvalues(const std::vector<Image>& samples,
                                     const FrequencyBasis& basis,
                                     EstimatorNormalization norm) {
    if (samples.empty()) throw DomainError("estimator: need at least one sample");
    const std::size_t rows = basis.rows;
    const std::size_t cols = basis.cols;
    const std::size_t freqs = rows * cols;

    std::vector<double> sums(freqs * 3, 0.0);
    blocked_accumulate(
        samples.size(), freqs * 3,
        [&](std::size_t k, double* acc) {
            const Image& img = samples[k];
            if (img.rows != rows || img.cols != cols) {
                throw DomainError("estimator: sample shape mismatch");
            }
            std::array<ComplexField, 3> hat;
            for (std::size_t c = 0; c < 3; ++c) {
                hat[c] = dft2_of_real(img.channels[c], rows, cols);
            }
            for (std::size_t p = 0; p < freqs; ++p) {
                Triple y{hat[0].data[p], hat[1].data[p], hat[2].data[p]};
                for (std::size_t j = 0; j < 3; ++j) {
                    acc[p * 3 + j] += std::norm(hdot(basis.vectors[p][j], y));
                }
            }
        },
        sums.data());

    const double c = estimator_constant(rows, cols, norm);
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    EigenEstimates est;
    est.rows = rows;
    est.cols = cols;
    est.triples.resize(freqs);
    for (std::size_t p = 0; p < freqs; ++p) {
        for (std::size_t j = 0; j < 3; ++j) {
            est.triples[p][j] = c * inv_n * sums[p * 3 + j];
        }
    }
    return est;
}

EigenEstimates estimate_exact_sampler(const Texton& texton,
                                      const FrequencyBasis& basis,
                                      std::uint64_t seed, std::size_t n,
                                      EstimatorNormalization norm) {
    if (n == 0) throw DomainError("estimator: need at least one sample");
    const std::size_t rows = texton.rows;
    const std::size_t cols = texton.cols;
    const std::size_t pixels = rows * cols;
    std::array<ComplexField, 3> kernel_hat;
    for (std::size_t c = 0; c < 3; ++c) {
        kernel_hat[c] = dft2_of_real(texton.channels[c], rows, cols);
    }

    std::vector<double> sums(pixels * 3, 0.0);
    blocked_accumulate(
        n, pixels * 3,
        [&](std::size_t k, double* acc) {
            // Regenerate sample k exactly as adsn_sample does, including the
            // spatial-domain round trip, so estimates match the stored-
            // sample path bit for bit.
            NormalStream stream(seed, k);
            ComplexField noise_hat = ComplexField::zeros(rows, cols);
            for (std::size_t p = 0; p < pixels; ++p) {
                noise_hat.data[p] = cplx{stream.next(), 0.0};
            }
            dft2(noise_hat, /*inverse=*/false);
            std::array<ComplexField, 3> hat;
            for (std::size_t c = 0; c < 3; ++c) {
                ComplexField prod = ComplexField::zeros(rows, cols);
                for (std::size_t p = 0; p < pixels; ++p) {
                    prod.data[p] = kernel_hat[c].data[p] * noise_hat.data[p];
                }
                dft2(prod, /*inverse=*/true);
                std::vector<double> spatial(pixels);
                for (std::size_t p = 0; p < pixels; ++p) {
                    spatial[p] = prod.data[p].real();
                }
                hat[c] = dft2_of_real(spatial, rows, cols);
            }
            for (std::size_t p = 0; p < pixels; ++p) {
                Triple y{hat[0].data[p], hat[1].data[p], hat[2].data[p]};
                for (std::size_t j = 0; j < 3; ++j) {
                    acc[p * 3 + j] += std::norm(hdot(basis.vectors[p][j], y));
                }
            }
        },
        sums.data());

    const double c = estimator_constant(rows, cols, norm);
    const double inv_n = 1.0 / static_cast<double>(n);
    EigenEstimates est;
    est.rows = rows;
    est.cols = cols;
    est.triples.resize(pixels);
    for (std::size_t p = 0; p < pixels; ++p) {
        for (std::size_t j = 0; j < 3; ++j) {
            est.triples[p][j] = c * inv_n * sums[p * 3 + j];
        }
    }
    return est;
}

double empirical_w2(const EigenEstimates& est, const AdsnSpectrum& ref) {
    if (est.rows != ref.rows || est.cols != ref.cols) {
        throw DomainError("empirical w2: estimate/reference shape mismatch");
    }
    double sum = 0.0;
    for (std::size_t p = 0; p < est.triples.size(); ++p) {
        double d = std::sqrt(est.triples[p][0]) - std::sqrt(ref.lambda1[p]);
        sum += d * d + est.triples[p][1] + est.triples[p][2];
    }
    return std::sqrt(sum);
}

std::string adsn_spectrum_csv(const AdsnSpectrum& spectrum) {
    std::string out = "xi_row,xi_col,lambda\n";
    for (std::size_t r = 0; r < spectrum.rows; ++r) {
        for (std::size_t c = 0; c < spectrum.cols; ++c) {
            out += std::to_string(r);
            out += ',';
            out += std::to_string(c);
            out += ',';
            out += format_full(spectrum.lambda1[r * spectrum.cols + c]);
            out += '\n';
        }
    }
    return out;
}

AdsnSpectrum load_adsn_spectrum(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0] != "xi_row,xi_col,lambda") {
        throw IngestError(path + ":1: expected header xi_row,xi_col,lambda");
    }
    struct Entry {
        std::size_t r, c;
        double v;
    };
    std::vector<Entry> entries;
    std::size_t rows = 0, cols = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> f = split(lines[i], ',');
        if (f.size() != 3) {
            throw IngestError(path + ":" + std::to_string(i + 1) +
                              ": expected 3 fields");
        }
        Entry e;
        e.r = static_cast<std::size_t>(parse_long(f[0], path, i + 1));
        e.c = static_cast<std::size_t>(parse_long(f[1], path, i + 1));
        e.v = parse_double(f[2], path, i + 1);
        rows = std::max(rows, e.r + 1);
        cols = std::max(cols, e.c + 1);
        entries.push_back(e);
    }
    if (entries.empty()) throw IngestError(path + ": no spectrum entries");
    if (entries.size() != rows * cols) {
        throw IngestError(path + ": incomplete frequency grid (" +
                          std::to_string(entries.size()) + " of " +
                          std::to_string(rows * cols) + " entries)");
    }
    AdsnSpectrum spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.lambda1.assign(rows * cols, 0.0);
    spec.zero_multiplicity = 2 * rows * cols;
    for (const Entry& e : entries) spec.lambda1[e.r * cols + e.c] = e.v;
    return spec;
}

std::string estimates_csv(const EigenEstimates& est) {
    std::string out = "xi_row,xi_col,l1,l2,l3\n";
    for (std::size_t r = 0; r < est.rows; ++r) {
        for (std::size_t c = 0; c < est.cols; ++c) {
            const std::array<double, 3>& t = est.triples[r * est.cols + c];
            out += std::to_string(r);
            out += ',';
            out += std::to_string(c);
            out += ',';
            out += format_full(t[0]);
            out += ',';
            out += format_full(t[1]);
            out += ',';
            out += format_full(t[2]);
            out += '\n';
        }
    }
    return out;
}

EigenEstimates load_estimates(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0] != "xi_row,xi_col,l1,l2,l3") {
        throw IngestError(path + ":1: expected header xi_row,xi_col,l1,l2,l3");
    }
    struct Entry {
        std::size_t r, c;
        std::array<double, 3> v;
    };
    std::vector<Entry> entries;
    std::size_t rows = 0, cols = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> f = split(lines[i], ',');
        if (f.size() != 5) {
            throw IngestError(path + ":" + std::to_string(i + 1) +
                              ": expected 5 fields");
        }
        Entry e;
        e.r = static_cast<std::size_t>(parse_long(f[0], path, i + 1));
        e.c = static_cast<std::size_t>(parse_long(f[1], path, i + 1));
        for (std::size_t j = 0; j < 3; ++j) {
            e.v[j] = parse_double(f[2 + j], path, i + 1);
        }
        rows = std::max(rows, e.r + 1);
        cols = std::max(cols, e.c + 1);
        entries.push_back(e);
    }
    if (entries.empty()) throw IngestError(path + ": no estimate entries");
    if (entries.size() != rows * cols) {
        throw IngestError(path + ": incomplete frequency grid");
    }
    EigenEstimates est;
    est.rows = rows;
    est.cols = cols;
    est.triples.assign(rows * cols, {0.0, 0.0, 0.0});
    for (const Entry& e : entries) est.triples[e.r * cols + e.c] = e.v;
    return est;
}

}  // namespace gdiff
