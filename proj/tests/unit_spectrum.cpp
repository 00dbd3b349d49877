#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gdiff/errors.hpp"
#include "gdiff/rng.hpp"
#include "gdiff/spectrum.hpp"
#include "oracle.hpp"

using gdiff::CovarianceSpectrum;
using gdiff::DomainError;
using gdiff::IngestError;
using gdiff::NoiseSchedule;
using gdiff::SampleMatrix;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "tmp_" + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("spectrum construction") {
    CovarianceSpectrum s = CovarianceSpectrum::from_values({1.0, 0.0, 2.0});
    CHECK(s.values == std::vector<double>{2.0, 1.0, 0.0});
    CHECK(s.dim() == 3);
    CHECK_THROWS_AS(CovarianceSpectrum::from_values({-1.0}), DomainError);

    CovarianceSpectrum ordered = CovarianceSpectrum::from_ordered({1.0, 3.0});
    CHECK(ordered.values == std::vector<double>{1.0, 3.0});
}

TEST_CASE("spectrum file round trip") {
    std::string p1 = write_temp("spec_sorted.csv", "1\n0\n2\n");
    CovarianceSpectrum s = gdiff::load_spectrum(p1);
    CHECK(s.values == std::vector<double>{2.0, 1.0, 0.0});

    std::string p2 = write_temp("spec_single.csv", "1e-6\n");
    CHECK(gdiff::load_spectrum(p2).values == std::vector<double>{1e-6});

    std::string p3 = write_temp("spec_neg.csv", "-1\n");
    CHECK_THROWS_AS(gdiff::load_spectrum(p3), DomainError);

    std::string p4 = write_temp("spec_empty.csv", "");
    CHECK_THROWS_AS(gdiff::load_spectrum(p4), IngestError);

    std::string p5 = write_temp("spec_junk.csv", "1\nabc\n");
    CHECK_THROWS_AS(gdiff::load_spectrum(p5), IngestError);

    CovarianceSpectrum fine = CovarianceSpectrum::from_values(
        {0.12345678901234567, 3.0e-17, 1234.5678});
    gdiff::save_spectrum("tmp_spec_rt.csv", fine);
    CovarianceSpectrum back = gdiff::load_spectrum("tmp_spec_rt.csv");
    CHECK(back.values == fine.values);
}

TEST_CASE("sample matrix file round trip") {
    SampleMatrix m = SampleMatrix::zeros(2, 3);
    m.at(0, 0) = 1.5;
    m.at(1, 2) = -0.25;
    gdiff::save_samples("tmp_samples_rt.csv", m);
    SampleMatrix back = gdiff::load_samples("tmp_samples_rt.csv");
    CHECK(back.rows == 2);
    CHECK(back.cols == 3);
    CHECK(back.data == m.data);

    std::string ragged = write_temp("samples_ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(gdiff::load_samples(ragged), IngestError);
}

TEST_CASE("empirical spectrum, hand cases") {
    SampleMatrix m = SampleMatrix::zeros(4, 2);
    m.at(0, 0) = 1.0;
    m.at(1, 0) = -1.0;
    m.at(2, 0) = 1.0;
    m.at(3, 0) = -1.0;
    CovarianceSpectrum s = gdiff::empirical_spectrum(m);
    CHECK(s.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.values[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    SampleMatrix same = SampleMatrix::zeros(5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        same.at(i, 0) = 2.0;
        same.at(i, 1) = -1.0;
        same.at(i, 2) = 0.5;
    }
    for (double v : gdiff::empirical_spectrum(same).values) CHECK(v == 0.0);

    CHECK_THROWS_AS(gdiff::empirical_spectrum(SampleMatrix::zeros(1, 2)),
                    DomainError);
}

TEST_CASE("empirical spectrum converges on standard normal data") {
    const std::size_t n = 100000;
    const std::size_t d = 8;
    SampleMatrix m = SampleMatrix::zeros(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        gdiff::NormalStream stream(21, i);
        for (std::size_t j = 0; j < d; ++j) m.at(i, j) = stream.next();
    }
    CovarianceSpectrum s = gdiff::empirical_spectrum(m);
    for (double v : s.values) CHECK(std::abs(v - 1.0) <= 0.05);
}

TEST_CASE("eigensolver matches a dense oracle") {
    oracle::Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t d = 5;
        SampleMatrix m = SampleMatrix::zeros(40, d);
        for (auto& v : m.data) v = rng.uniform(-2.0, 2.0);

        // Dense covariance of the centered samples, fed to both solvers.
        std::vector<double> mean(d, 0.0);
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < d; ++j) mean[j] += m.at(i, j) / 40.0;
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
        for (std::size_t i = 0; i < m.rows; ++i) {
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) {
                    cov(a, b) += (m.at(i, a) - mean[a]) * (m.at(i, b) - mean[b]) / 40.0;
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);

        CovarianceSpectrum ours = gdiff::empirical_spectrum(m);
        REQUIRE(ours.dim() == d);
        for (std::size_t j = 0; j < d; ++j) {
            double ref = es.eigenvalues()[static_cast<Eigen::Index>(d - 1 - j)];
            CHECK(ours.values[j] == doctest::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("jacobi handles an already-diagonal matrix and clamps roundoff") {
    std::vector<double> diag = {3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, -5e-13};
    std::vector<double> vals = gdiff::symmetric_eigenvalues(diag, 3);
    CHECK(vals == std::vector<double>{3.0, 2.0, 0.0});
}

TEST_CASE("synthetic spectra") {
    CHECK(gdiff::synthetic_spectrum(gdiff::SynthKind::kSingle, 1, 1.0, 1.0, 0)
              .values == std::vector<double>{1.0});

    CovarianceSpectrum geo =
        gdiff::synthetic_spectrum(gdiff::SynthKind::kGeometric, 3, 0.01, 1.0, 0);
    REQUIRE(geo.dim() == 3);
    CHECK(geo.values[0] == 1.0);
    CHECK(geo.values[1] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(geo.values[2] == 0.01);

    CovarianceSpectrum lu = gdiff::synthetic_spectrum(
        gdiff::SynthKind::kLogUniform, 100, 1e-6, 1e3, 7);
    REQUIRE(lu.dim() == 100);
    for (double v : lu.values) {
        CHECK(v >= 1e-6);
        CHECK(v <= 1e3);
    }
    CovarianceSpectrum lu2 = gdiff::synthetic_spectrum(
        gdiff::SynthKind::kLogUniform, 100, 1e-6, 1e3, 7);
    CHECK(lu.values == lu2.values);
    CovarianceSpectrum lu3 = gdiff::synthetic_spectrum(
        gdiff::SynthKind::kLogUniform, 100, 1e-6, 1e3, 8);
    CHECK(lu.values != lu3.values);

    CHECK_THROWS_AS(gdiff::synthetic_spectrum(gdiff::SynthKind::kLogUniform, 4,
                                              0.0, 1.0, 0),
                    DomainError);
    CHECK_THROWS_AS(
        gdiff::synthetic_spectrum(gdiff::SynthKind::kGeometric, 4, 2.0, 1.0, 0),
        DomainError);
}

TEST_CASE("forward map, hand values") {
    NoiseSchedule c = NoiseSchedule::constant(1.0, 1.0);
    CHECK(gdiff::forward_eigenvalue(1.0, 0.7, c) == doctest::Approx(1.0));
    CHECK(gdiff::forward_eigenvalue(2.0, 1.0, c) ==
          doctest::Approx(1.0 + std::exp(-2.0)).epsilon(1e-12));
    CHECK(gdiff::forward_eigenvalue(0.0, 1.0, c) ==
          doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("forward map is the identity at t=0 and stays bracketed") {
    oracle::Rng rng(41);
    NoiseSchedule lin = NoiseSchedule::standard_linear();
    for (int i = 0; i < 500; ++i) {
        double lambda = rng.uniform(0.0, 100.0);
        CHECK(gdiff::forward_eigenvalue(lambda, 0.0, lin) == lambda);
        double t = rng.uniform(1e-6, 1.0);
        double v = gdiff::forward_eigenvalue(lambda, t, lin);
        CHECK(v >= std::min(lambda, 1.0) - 1e-15);
        CHECK(v <= std::max(lambda, 1.0) + 1e-15);
        CHECK(v > 0.0);
    }

    CovarianceSpectrum s = CovarianceSpectrum::from_values({3.0, 1.0, 0.0});
    CovarianceSpectrum at0 = gdiff::forward_spectrum(s, 0.0, lin);
    CHECK(at0.values == s.values);
    CHECK(gdiff::forward_spectrum(s, 0.5, lin).dim() == 3);
}

TEST_CASE("forward map satisfies the covariance ODE") {
    oracle::Rng rng(43);
    NoiseSchedule scheds[] = {NoiseSchedule::standard_linear(),
                              NoiseSchedule::constant(0.9, 1.0)};
    for (const NoiseSchedule& sched : scheds) {
        for (int rep = 0; rep < 20; ++rep) {
            double lambda = rng.uniform(0.0, 100.0);
            const double h = 1e-5;
            for (int g = 1; g < 100; ++g) {
                double t = g * (sched.horizon - 2 * h) / 100.0 + h;
                double up = gdiff::forward_eigenvalue(lambda, t + h, sched);
                double down = gdiff::forward_eigenvalue(lambda, t - h, sched);
                double fd = (up - down) / (2.0 * h);
                double lam_t = gdiff::forward_eigenvalue(lambda, t, sched);
                double rhs = 2.0 * sched.beta(t) * (1.0 - lam_t);
                CHECK(std::abs(fd - rhs) <= 1e-6 * (1.0 + std::abs(rhs)));
            }
        }
    }
}
