#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdiff/schemes.hpp"
#include "gdiff/wasserstein.hpp"

namespace gdiff {

struct ValidationRow {
    std::size_t index = 0;  // step index (schemes) or grid index (continuous)
    double analytic = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;  // empirical * sqrt(2/n) for a variance estimate
    double z = 0.0;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    double z_max = 4.0;
    double max_abs_z = 0.0;
    bool pass = false;
    std::string note;  // multiple-comparison remark when many rows are tested
};

// Simulates n realizations of the literal scheme dynamics for one
// eigen-coordinate and compares per-step empirical variances against the
// analytic variance recursion. For the deterministic schemes the initial
// draw is transported verbatim, so the empirical sequence is normalized by
// (analytic[0] / empirical[0]); any surviving discrepancy is a genuine
// mismatch between recursion and dynamics rather than sampling noise.
ValidationReport validate_scheme(SchemeKind kind, double lambda,
                                 const SamplerConfig& cfg,
                                 std::size_t n_samples, std::uint64_t seed,
                                 double z_max = 4.0);

// Draws directly from the closed-form marginal laws of the idealized
// generators (transport of the initial draw plus, for the SDE, independent
// noise with the exact residual variance) and compares against the
// closed-form variances on s_grid.
ValidationReport validate_continuous(SourceKind which, double lambda,
                                     double c0, std::size_t n_samples,
                                     std::uint64_t seed,
                                     const std::vector<double>& s_grid,
                                     const NoiseSchedule& sched,
                                     double z_max = 4.0);

// CSV contract: header k,analytic,empirical,stderr,z.
std::string report_csv(const ValidationReport& report);

}  // namespace gdiff
