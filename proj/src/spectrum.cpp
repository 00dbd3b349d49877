#include "gdiff/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"
#include "gdiff/rng.hpp"

namespace gdiff {

namespace {
void check_nonnegative(const std::vector<double>& values) {
    for (double v : values) {
        if (!(v >= 0.0)) {
            throw DomainError("spectrum: eigenvalue must be >= 0, got " +
                              format_short(v));
        }
    }
}
}  // namespace

CovarianceSpectrum CovarianceSpectrum::from_values(std::vector<double> values) {
    check_nonnegative(values);
    std::sort(values.begin(), values.end(), std::greater<double>());
    return CovarianceSpectrum{std::move(values)};
}

CovarianceSpectrum CovarianceSpectrum::from_ordered(std::vector<double> values) {
    check_nonnegative(values);
    return CovarianceSpectrum{std::move(values)};
}

SampleMatrix SampleMatrix::zeros(std::size_t rows, std::size_t cols) {
    SampleMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.data.assign(rows * cols, 0.0);
    return m;
}

CovarianceSpectrum load_spectrum(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    std::vector<double> values;
    values.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        values.push_back(parse_double(lines[i], path, i + 1));
    }
    if (values.empty()) throw IngestError(path + ": no eigenvalues found");
    return CovarianceSpectrum::from_values(std::move(values));
}

void save_spectrum(const std::string& path,
                   const CovarianceSpectrum& spectrum) {
    std::string out;
    for (double v : spectrum.values) {
        out += format_full(v);
        out += '\n';
    }
    write_file(path, out);
}

SampleMatrix load_samples(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    SampleMatrix m;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> fields = split(lines[i], ',');
        if (m.cols == 0) {
            m.cols = fields.size();
        } else if (fields.size() != m.cols) {
            throw IngestError(path + ":" + std::to_string(i + 1) +
                              ": expected " + std::to_string(m.cols) +
                              " fields, got " + std::to_string(fields.size()));
        }
        for (const std::string& f : fields) {
            m.data.push_back(parse_double(f, path, i + 1));
        }
        ++m.rows;
    }
    if (m.rows == 0) throw IngestError(path + ": no samples found");
    return m;
}

void save_samples(const std::string& path, const SampleMatrix& samples) {
    std::string out;
    for (std::size_t i = 0; i < samples.rows; ++i) {
        for (std::size_t j = 0; j < samples.cols; ++j) {
            if (j) out += ',';
            out += format_full(samples.at(i, j));
        }
        out += '\n';
    }
    write_file(path, out);
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a,
                                          std::size_t d) {
    if (a.size() != d * d) {
        throw DomainError("eigensolver: matrix size does not match dimension");
    }
    auto at = [&](std::size_t i, std::size_t j) -> double& {
        return a[i * d + j];
    };

    double fro = 0.0;
    for (double v : a) fro += v * v;
    fro = std::sqrt(fro);
    const double threshold = 1e-12 * fro;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                s += 2.0 * at(p, q) * at(p, q);
            }
        }
        return std::sqrt(s);
    };

    const int kMaxSweeps = 100;
    int sweep = 0;
    while (off_norm() > threshold) {
        if (++sweep > kMaxSweeps) {
            throw NumericError("eigensolver: no convergence in " +
                               std::to_string(kMaxSweeps) + " sweeps");
        }
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double apq = at(p, q);
                if (apq == 0.0) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                // Rotate rows/columns p and q.
                for (std::size_t k = 0; k < d; ++k) {
                    double akp = at(k, p);
                    double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double apk = at(p, k);
                    double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eig(d);
    for (std::size_t i = 0; i < d; ++i) {
        double v = at(i, i);
        if (v < 0.0 && v >= -1e-12) v = 0.0;
        eig[i] = v;
    }
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

CovarianceSpectrum empirical_spectrum(const SampleMatrix& samples) {
    if (samples.rows < 2 || samples.cols == 0) {
        throw DomainError("empirical spectrum: need at least 2 samples");
    }
    const std::size_t n = samples.rows;
    const std::size_t d = samples.cols;

    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) mean[j] += samples.at(i, j);
    }
    for (double& m : mean) m /= static_cast<double>(n);

    std::vector<double> cov(d * d, 0.0);
    std::vector<double> centered(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            centered[j] = samples.at(i, j) - mean[j];
        }
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p; q < d; ++q) {
                cov[p * d + q] += centered[p] * centered[q];
            }
        }
    }
    for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = p; q < d; ++q) {
            double v = cov[p * d + q] / static_cast<double>(n);
            cov[p * d + q] = v;
            cov[q * d + p] = v;
        }
    }

    std::vector<double> eig = symmetric_eigenvalues(std::move(cov), d);
    // The empirical covariance is positive semidefinite by construction, so
    // any remaining negativity is eigensolver roundoff; absorb it at a scale
    // proportional to the matrix size.
    double scale = 0.0;
    for (double v : eig) scale = std::max(scale, std::abs(v));
    for (double& v : eig) {
        if (v < 0.0 && v >= -1e-12 * (1.0 + scale)) v = 0.0;
    }
    return CovarianceSpectrum::from_values(std::move(eig));
}

CovarianceSpectrum synthetic_spectrum(SynthKind kind, std::size_t d,
                                      double lambda_min, double lambda_max,
                                      std::uint64_t seed) {
    if (d == 0) throw DomainError("synthetic spectrum: dimension must be >= 1");
    if (!(lambda_min >= 0.0) || !(lambda_max >= lambda_min)) {
        throw DomainError(
            "synthetic spectrum: need 0 <= lambda_min <= lambda_max");
    }
    std::vector<double> values(d);
    switch (kind) {
        case SynthKind::kSingle: {
            std::fill(values.begin(), values.end(), lambda_max);
            break;
        }
        case SynthKind::kGeometric: {
            if (d == 1 || lambda_max == 0.0) {
                std::fill(values.begin(), values.end(), lambda_max);
                break;
            }
            double ratio = std::pow(lambda_min / lambda_max,
                                    1.0 / static_cast<double>(d - 1));
            double v = lambda_max;
            for (std::size_t i = 0; i < d; ++i) {
                values[i] = v;
                v *= ratio;
            }
            values[d - 1] = lambda_min;  // pin the endpoint exactly
            break;
        }
        case SynthKind::kLogUniform: {
            if (!(lambda_min > 0.0)) {
                throw DomainError(
                    "synthetic spectrum: loguniform needs lambda_min > 0");
            }
            double lo = std::log(lambda_min);
            double hi = std::log(lambda_max);
            for (std::size_t i = 0; i < d; ++i) {
                double u = uniform_at(seed, /*stream=*/0, i);
                values[i] = std::exp(lo + u * (hi - lo));
            }
            break;
        }
    }
    return CovarianceSpectrum::from_values(std::move(values));
}

double forward_eigenvalue(double lambda, double t, const NoiseSchedule& sched) {
    if (!(lambda >= 0.0)) {
        throw DomainError("forward eigenvalue: lambda must be >= 0");
    }
    double decay = std::exp(-2.0 * sched.beta_integral(t));
    return decay * lambda + (1.0 - decay);
}

CovarianceSpectrum forward_spectrum(const CovarianceSpectrum& spectrum,
                                    double t, const NoiseSchedule& sched) {
    std::vector<double> out(spectrum.dim());
    double decay = std::exp(-2.0 * sched.beta_integral(t));
    for (std::size_t i = 0; i < spectrum.dim(); ++i) {
        out[i] = decay * spectrum.values[i] + (1.0 - decay);
    }
    return CovarianceSpectrum::from_ordered(std::move(out));
}

}  // namespace gdiff
