#include "gdiff/montecarlo.hpp"

#include <cmath>
#include <limits>

#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"
#include "gdiff/parallel.hpp"
#include "gdiff/rng.hpp"

namespace gdiff {

namespace {

void finalize(ValidationReport& report, const std::vector<double>& analytic,
              const std::vector<double>& empirical, std::size_t n_samples) {
    const double rel = std::sqrt(2.0 / static_cast<double>(n_samples));
    report.rows.resize(analytic.size());
    report.max_abs_z = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        ValidationRow& row = report.rows[k];
        row.index = k;
        row.analytic = analytic[k];
        row.empirical = empirical[k];
        row.std_error = empirical[k] * rel;
        if (row.std_error == 0.0) {
            row.z = (row.empirical == row.analytic)
                        ? 0.0
                        : std::numeric_limits<double>::infinity();
        } else {
            row.z = (row.empirical - row.analytic) / row.std_error;
        }
        report.max_abs_z = std::max(report.max_abs_z, std::abs(row.z));
    }
    report.pass = report.max_abs_z <= report.z_max;
    if (report.rows.size() >= 10) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "union bound over %zu comparisons at |z|<=%g: "
                      "false-failure probability <= %.2e",
                      report.rows.size(), report.z_max,
                      static_cast<double>(report.rows.size()) *
                          std::erfc(report.z_max / std::sqrt(2.0)));
        report.note = buf;
    }
}

}  // namespace

ValidationReport validate_scheme(SchemeKind kind, double lambda,
                                 const SamplerConfig& cfg,
                                 std::size_t n_samples, std::uint64_t seed,
                                 double z_max) {
    if (n_samples < 2) throw DomainError("validate: need at least 2 samples");

    EigenTrajectory analytic = eigen_recursion(kind, lambda, cfg);
    std::vector<StepUpdate> updates = scheme_step_updates(kind, lambda, cfg);
    const double init_std =
        std::sqrt(cfg.init.eigenvalue(lambda, cfg.sched));
    const std::size_t n_points = cfg.steps + 1;

    std::vector<double> sums(n_points, 0.0);
    blocked_accumulate(
        n_samples, n_points,
        [&](std::size_t j, double* acc) {
            NormalStream stream(seed, j);
            double x = init_std * stream.next();
            acc[0] += x * x;
            for (std::size_t k = 0; k < updates.size(); ++k) {
                x = apply_step(kind, updates[k], x, stream);
                acc[k + 1] += x * x;
            }
        },
        sums.data());

    std::vector<double> empirical(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        empirical[k] = sums[k] / static_cast<double>(n_samples);
    }

    // Deterministic schemes carry the initial draw through a noise-free
    // linear map, so the only sampling fluctuation is the initial variance
    // estimate; divide it out. The ratio empirical[k]/empirical[0] is then an
    // exact (machine-precision) estimate of the squared multiplier product.
    if (!scheme_is_stochastic(kind) && empirical[0] > 0.0 &&
        analytic.values[0] > 0.0) {
        double base = empirical[0];
        for (std::size_t k = 0; k < n_points; ++k) {
            empirical[k] = (empirical[k] / base) * analytic.values[0];
        }
    }

    ValidationReport report;
    report.z_max = z_max;
    finalize(report, analytic.values, empirical, n_samples);
    return report;
}

ValidationReport validate_continuous(SourceKind which, double lambda,
                                     double c0, std::size_t n_samples,
                                     std::uint64_t seed,
                                     const std::vector<double>& s_grid,
                                     const NoiseSchedule& sched,
                                     double z_max) {
    if (n_samples < 2) throw DomainError("validate: need at least 2 samples");
    if (!source_is_continuous(which)) {
        throw DomainError("validate_continuous: source must be sde or ode");
    }
    if (s_grid.empty()) throw DomainError("validate: empty time grid");
    const bool is_sde = which == SourceKind::kSde;
    const std::size_t n_points = s_grid.size();

    std::vector<double> analytic(n_points);
    std::vector<double> transport(n_points);
    std::vector<double> noise_std(n_points, 0.0);
    for (std::size_t i = 0; i < n_points; ++i) {
        double s = s_grid[i];
        if (is_sde) {
            analytic[i] = sde_marginal_eigenvalue(lambda, c0, s, sched);
            transport[i] = sde_transport_coefficient(lambda, s, sched);
            noise_std[i] = std::sqrt(sde_noise_variance(lambda, s, sched));
        } else {
            analytic[i] = ode_marginal_eigenvalue(lambda, c0, s, sched);
            double lam_s = forward_eigenvalue(lambda, s, sched);
            double lam_horizon = forward_eigenvalue(lambda, sched.horizon, sched);
            transport[i] = std::sqrt(lam_s / lam_horizon);
        }
    }
    const double init_std = std::sqrt(c0);

    std::vector<double> sums(n_points, 0.0);
    blocked_accumulate(
        n_samples, n_points,
        [&](std::size_t j, double* acc) {
            NormalStream stream(seed, j);
            double x0 = init_std * stream.next();
            for (std::size_t i = 0; i < n_points; ++i) {
                double y = transport[i] * x0;
                if (is_sde) y += noise_std[i] * stream.next();
                acc[i] += y * y;
            }
        },
        sums.data());

    std::vector<double> empirical(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        empirical[i] = sums[i] / static_cast<double>(n_samples);
    }

    ValidationReport report;
    report.z_max = z_max;
    finalize(report, analytic, empirical, n_samples);
    return report;
}

std::string report_csv(const ValidationReport& report) {
    std::string out = "k,analytic,empirical,stderr,z\n";
    for (const ValidationRow& row : report.rows) {
        out += std::to_string(row.index);
        out += ',';
        out += format_short(row.analytic);
        out += ',';
        out += format_short(row.empirical);
        out += ',';
        out += format_short(row.std_error);
        out += ',';
        out += format_short(row.z);
        out += '\n';
    }
    return out;
}

}  // namespace gdiff
