#include "gdiff/wasserstein.hpp"

#include <cmath>

#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"
#include "gdiff/parallel.hpp"

namespace gdiff {

double w2_diag(const CovarianceSpectrum& a, const CovarianceSpectrum& b) {
    if (a.dim() != b.dim()) {
        throw DomainError("w2: dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double d = std::sqrt(a.values[i]) - std::sqrt(b.values[i]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

const char* source_name(SourceKind source) {
    switch (source) {
        case SourceKind::kSde:
            return "sde";
        case SourceKind::kOde:
            return "ode";
        case SourceKind::kEm:
            return "em";
        case SourceKind::kEi:
            return "ei";
        case SourceKind::kEuler:
            return "euler";
        case SourceKind::kHeun:
            return "heun";
    }
    return "?";
}

SourceKind source_from_name(const std::string& name) {
    if (name == "sde") return SourceKind::kSde;
    if (name == "ode") return SourceKind::kOde;
    if (name == "em") return SourceKind::kEm;
    if (name == "ei") return SourceKind::kEi;
    if (name == "euler") return SourceKind::kEuler;
    if (name == "heun") return SourceKind::kHeun;
    throw DomainError("unknown source '" + name +
                      "' (expected sde, ode, em, ei, euler, heun)");
}

bool source_is_continuous(SourceKind source) {
    return source == SourceKind::kSde || source == SourceKind::kOde;
}

SourceKind continuous_counterpart(SchemeKind kind) {
    return scheme_is_stochastic(kind) ? SourceKind::kSde : SourceKind::kOde;
}

SchemeKind scheme_of_source(SourceKind source) {
    switch (source) {
        case SourceKind::kEm:
            return SchemeKind::kEm;
        case SourceKind::kEi:
            return SchemeKind::kEi;
        case SourceKind::kEuler:
            return SchemeKind::kEuler;
        case SourceKind::kHeun:
            return SchemeKind::kHeun;
        default:
            throw DomainError("source is not a scheme");
    }
}

CovarianceSpectrum continuous_marginal_spectrum(SourceKind source,
                                                const CovarianceSpectrum& data,
                                                double s,
                                                const NoiseSchedule& sched,
                                                const InitLaw& init) {
    if (!source_is_continuous(source)) {
        throw DomainError("continuous marginal: source must be sde or ode");
    }
    std::vector<double> out(data.dim());
    for (std::size_t i = 0; i < data.dim(); ++i) {
        double lambda = data.values[i];
        double c0 = init.eigenvalue(lambda, sched);
        out[i] = source == SourceKind::kSde
                     ? sde_marginal_eigenvalue(lambda, c0, s, sched)
                     : ode_marginal_eigenvalue(lambda, c0, s, sched);
    }
    return CovarianceSpectrum::from_ordered(std::move(out));
}

namespace {
std::string curve_label(SourceKind source, const SamplerConfig& cfg) {
    std::string label = source_name(source);
    if (!source_is_continuous(source)) {
        label += " N=" + std::to_string(cfg.steps);
    }
    label += " eps=" + format_short(cfg.truncation);
    label += " init=" + cfg.init.label();
    return label;
}

// W2 between a raw eigenvalue row and the forward spectrum at tau.
double w2_row_vs_forward(const std::vector<double>& row,
                         const CovarianceSpectrum& data, double tau,
                         const NoiseSchedule& sched) {
    double decay = std::exp(-2.0 * sched.beta_integral(tau));
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        double fwd = decay * data.values[i] + (1.0 - decay);
        double d = std::sqrt(row[i]) - std::sqrt(fwd);
        sum += d * d;
    }
    return std::sqrt(sum);
}
}  // namespace

ErrorCurve error_curve(SourceKind source, const CovarianceSpectrum& data,
                       const SamplerConfig& cfg) {
    if (data.dim() == 0) throw DomainError("error curve: empty spectrum");
    TimeGrid grid = time_grid(cfg);
    ErrorCurve curve;
    curve.label = curve_label(source, cfg);
    curve.times = grid.forward;
    curve.values.assign(grid.forward.size(), 0.0);

    if (source_is_continuous(source)) {
        for (std::size_t k = 0; k < grid.forward.size(); ++k) {
            double tau = grid.forward[k];
            CovarianceSpectrum marg = continuous_marginal_spectrum(
                source, data, tau, cfg.sched, cfg.init);
            curve.values[k] =
                w2_row_vs_forward(marg.values, data, tau, cfg.sched);
        }
    } else {
        spectrum_recursion_visit(
            scheme_of_source(source), data, cfg,
            [&](std::size_t k, const std::vector<double>& row) {
                curve.values[k] =
                    w2_row_vs_forward(row, data, grid.forward[k], cfg.sched);
            });
    }
    return curve;
}

std::vector<AblationCell> ablation_table(const CovarianceSpectrum& data,
                                         const std::vector<SchemeKind>& schemes,
                                         const std::vector<std::size_t>& n_list,
                                         const std::vector<double>& eps_list,
                                         const std::vector<InitLaw>& inits,
                                         const NoiseSchedule& sched) {
    if (data.dim() == 0) throw DomainError("ablation: empty spectrum");

    // Materialize the cell grid first so cells can run in parallel into
    // fixed slots.
    std::vector<AblationCell> cells;
    std::vector<InitLaw> cell_init;
    for (SchemeKind scheme : schemes) {
        for (double eps : eps_list) {
            for (const InitLaw& init : inits) {
                AblationCell base;
                base.scheme = scheme;
                base.eps = eps;
                base.init_label = init.label();
                base.continuous = true;
                cells.push_back(base);
                cell_init.push_back(init);
                base.continuous = false;
                for (std::size_t n : n_list) {
                    base.steps = n;
                    cells.push_back(base);
                    cell_init.push_back(init);
                }
            }
        }
    }

    parallel_for(cells.size(), [&](std::size_t idx) {
        AblationCell& cell = cells[idx];
        const InitLaw& init = cell_init[idx];
        SamplerConfig cfg;
        cfg.sched = sched;
        cfg.truncation = cell.eps;
        cfg.init = init;
        cfg.steps = cell.continuous ? 1 : cell.steps;
        try {
            if (cell.continuous) {
                CovarianceSpectrum marg = continuous_marginal_spectrum(
                    continuous_counterpart(cell.scheme), data, cell.eps, sched,
                    init);
                cell.w2 = w2_diag(marg, data);
            } else {
                std::vector<double> final_row;
                spectrum_recursion_visit(
                    cell.scheme, data, cfg,
                    [&](std::size_t k, const std::vector<double>& row) {
                        if (k == cfg.steps) final_row = row;
                    });
                cell.w2 = w2_row_vs_forward(final_row, data, 0.0, sched);
            }
            cell.defined = true;
        } catch (const DegenerateScore&) {
            cell.defined = false;
            cell.w2 = 0.0;
        }
    });
    return cells;
}

std::vector<ContributionPoint> eigen_contribution(
    SourceKind source, const std::vector<double>& lambda_grid,
    const SamplerConfig& cfg) {
    std::vector<ContributionPoint> points(lambda_grid.size());
    parallel_for(lambda_grid.size(), [&](std::size_t i) {
        double lambda = lambda_grid[i];
        if (!(lambda >= 0.0)) {
            throw DomainError("contribution: lambda must be >= 0");
        }
        ContributionPoint& p = points[i];
        p.lambda = lambda;
        try {
            double final_value;
            if (source_is_continuous(source)) {
                double c0 = cfg.init.eigenvalue(lambda, cfg.sched);
                final_value =
                    source == SourceKind::kSde
                        ? sde_marginal_eigenvalue(lambda, c0, cfg.truncation,
                                                  cfg.sched)
                        : ode_marginal_eigenvalue(lambda, c0, cfg.truncation,
                                                  cfg.sched);
            } else {
                EigenTrajectory traj =
                    eigen_recursion(scheme_of_source(source), lambda, cfg);
                final_value = traj.values.back();
            }
            p.defined = true;
            p.value = std::abs(std::sqrt(lambda) - std::sqrt(final_value));
        } catch (const DegenerateScore&) {
            p.defined = false;
            p.value = 0.0;
        }
    });
    return points;
}

CovarianceSpectrum empirical_spectrum_in_basis(const SampleMatrix& samples) {
    if (samples.rows < 2) {
        throw DomainError("empirical basis spectrum: need n >= 2 samples");
    }
    std::vector<double> moments(samples.cols, 0.0);
    for (std::size_t i = 0; i < samples.rows; ++i) {
        for (std::size_t j = 0; j < samples.cols; ++j) {
            double v = samples.at(i, j);
            moments[j] += v * v;
        }
    }
    for (double& m : moments) m /= static_cast<double>(samples.rows);
    return CovarianceSpectrum::from_ordered(std::move(moments));
}

std::string curve_csv(const ErrorCurve& curve) {
    return curves_csv({curve});
}

std::string curves_csv(const std::vector<ErrorCurve>& curves) {
    std::string out = "tau,w2,label\n";
    for (const ErrorCurve& curve : curves) {
        for (std::size_t k = 0; k < curve.times.size(); ++k) {
            out += format_short(curve.times[k]);
            out += ',';
            out += format_short(curve.values[k]);
            out += ',';
            out += curve.label;
            out += '\n';
        }
    }
    return out;
}

std::string table_csv(const std::vector<AblationCell>& cells) {
    std::string out = "scheme,N,eps,init,w2\n";
    for (const AblationCell& cell : cells) {
        out += scheme_name(cell.scheme);
        out += ',';
        out += cell.continuous ? "continuous" : std::to_string(cell.steps);
        out += ',';
        out += format_short(cell.eps);
        out += ',';
        out += cell.init_label;
        out += ',';
        out += cell.defined ? format_short(cell.w2) : "undefined";
        out += '\n';
    }
    return out;
}

std::string contribution_csv(const std::vector<ContributionPoint>& points) {
    std::string out = "lambda,contribution\n";
    for (const ContributionPoint& p : points) {
        out += format_short(p.lambda);
        out += ',';
        out += p.defined ? format_short(p.value) : "undefined";
        out += '\n';
    }
    return out;
}

}  // namespace gdiff
