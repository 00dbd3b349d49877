#include "gdiff/schemes.hpp"

#include <cmath>

#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"
#include "gdiff/parallel.hpp"
#include "gdiff/rng.hpp"

namespace gdiff {

const char* scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::kEm:
            return "em";
        case SchemeKind::kEi:
            return "ei";
        case SchemeKind::kEuler:
            return "euler";
        case SchemeKind::kHeun:
            return "heun";
    }
    return "?";
}

SchemeKind scheme_from_name(const std::string& name) {
    if (name == "em") return SchemeKind::kEm;
    if (name == "ei") return SchemeKind::kEi;
    if (name == "euler") return SchemeKind::kEuler;
    if (name == "heun") return SchemeKind::kHeun;
    throw DomainError("unknown scheme '" + name +
                      "' (expected em, ei, euler, heun)");
}

bool scheme_is_stochastic(SchemeKind kind) {
    return kind == SchemeKind::kEm || kind == SchemeKind::kEi;
}

void SamplerConfig::validate() const {
    if (steps < 1) throw DomainError("sampler: need at least one step");
    if (!(truncation >= 0.0) || !(truncation < sched.horizon)) {
        throw DomainError("sampler: truncation must satisfy 0 <= eps < T");
    }
}

TimeGrid time_grid(const SamplerConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.steps;
    const double horizon = cfg.sched.horizon;
    const double span = horizon - cfg.truncation;
    TimeGrid grid;
    grid.step = span / static_cast<double>(n);
    grid.backward.resize(n + 1);
    grid.forward.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        grid.backward[k] = static_cast<double>(k) * grid.step;
        grid.forward[k] = horizon - grid.backward[k];
    }
    // Pin the endpoints so the final state is reported exactly at eps.
    grid.backward[n] = span;
    grid.forward[n] = cfg.truncation;
    return grid;
}

EiCoefficients ei_coefficients(const NoiseSchedule& sched, double tau_from,
                               double tau_to) {
    if (!(tau_from >= tau_to)) {
        throw DomainError("ei coefficients: need tau_from >= tau_to");
    }
    double db = sched.beta_integral(tau_from) - sched.beta_integral(tau_to);
    return EiCoefficients{std::exp(db) - 1.0, 0.5 * (std::exp(2.0 * db) - 1.0)};
}

EiCoefficients ei_coefficients(std::size_t k, const SamplerConfig& cfg) {
    TimeGrid grid = time_grid(cfg);
    if (k >= cfg.steps) throw DomainError("ei coefficients: step out of range");
    return ei_coefficients(cfg.sched, grid.forward[k], grid.forward[k + 1]);
}

namespace {

// Per-step scalar context shared by every eigen-coordinate.
struct StepContext {
    double delta = 0.0;
    double tau_left = 0.0, tau_right = 0.0;
    double beta_left = 0.0, beta_right = 0.0;
    double decay_left = 0.0, decay_right = 0.0;  // exp(-2 B(tau))
    EiCoefficients ei;
};

std::vector<StepContext> build_contexts(SchemeKind kind,
                                        const SamplerConfig& cfg) {
    TimeGrid grid = time_grid(cfg);
    std::vector<StepContext> ctx(cfg.steps);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        StepContext& c = ctx[k];
        c.delta = grid.step;
        c.tau_left = grid.forward[k];
        c.tau_right = grid.forward[k + 1];
        c.beta_left = cfg.sched.beta(c.tau_left);
        c.beta_right = cfg.sched.beta(c.tau_right);
        c.decay_left = std::exp(-2.0 * cfg.sched.beta_integral(c.tau_left));
        c.decay_right = std::exp(-2.0 * cfg.sched.beta_integral(c.tau_right));
        if (kind == SchemeKind::kEi) {
            c.ei = ei_coefficients(cfg.sched, c.tau_left, c.tau_right);
        }
    }
    return ctx;
}

double forward_var(double decay, double lambda) {
    return decay * lambda + (1.0 - decay);
}

[[noreturn]] void degenerate(SchemeKind kind, double tau, double eps) {
    throw DegenerateScore(std::string(scheme_name(kind)) +
                          ": score undefined at forward time " +
                          format_short(tau) +
                          " (forward variance is 0); eps=" + format_short(eps));
}

double checked_forward_var(SchemeKind kind, double decay, double lambda,
                           double tau, double eps) {
    double v = forward_var(decay, lambda);
    if (v == 0.0) degenerate(kind, tau, eps);
    return v;
}

// Deterministic multiplier of the linear per-step update
//   x <- mult x + noise_std z.
double step_multiplier(SchemeKind kind, const StepContext& c, double lambda,
                       double eps) {
    switch (kind) {
        case SchemeKind::kEm: {
            double fv = checked_forward_var(kind, c.decay_left, lambda,
                                            c.tau_left, eps);
            return 1.0 + c.delta * c.beta_left * (1.0 - 2.0 / fv);
        }
        case SchemeKind::kEi: {
            double fv = checked_forward_var(kind, c.decay_left, lambda,
                                            c.tau_left, eps);
            return 1.0 + c.ei.drift_gain * (1.0 - 2.0 / fv);
        }
        case SchemeKind::kEuler: {
            double fv = checked_forward_var(kind, c.decay_left, lambda,
                                            c.tau_left, eps);
            return 1.0 + c.delta * c.beta_left * (1.0 - 1.0 / fv);
        }
        case SchemeKind::kHeun: {
            double fv_left = checked_forward_var(kind, c.decay_left, lambda,
                                                 c.tau_left, eps);
            double fv_right = checked_forward_var(kind, c.decay_right, lambda,
                                                  c.tau_right, eps);
            double g_left = c.beta_left * (1.0 - 1.0 / fv_left);
            double g_right = c.beta_right * (1.0 - 1.0 / fv_right);
            return 1.0 + 0.5 * c.delta * g_left +
                   0.5 * c.delta * g_right * (1.0 + c.delta * g_left);
        }
    }
    return 1.0;
}

double step_noise_variance(SchemeKind kind, const StepContext& c) {
    switch (kind) {
        case SchemeKind::kEm:
            return 2.0 * c.delta * c.beta_left;
        case SchemeKind::kEi:
            return 2.0 * c.ei.noise_gain;
        case SchemeKind::kEuler:
        case SchemeKind::kHeun:
            return 0.0;
    }
    return 0.0;
}

// Slope of the probability-flow field for one eigen-coordinate:
// dx/dt(backward) = beta (1 - 1/forward_var) x.
struct HeunGains {
    double left = 0.0, right = 0.0;
};
HeunGains heun_gains(const StepContext& c, double lambda, double eps) {
    double fv_left = checked_forward_var(SchemeKind::kHeun, c.decay_left,
                                         lambda, c.tau_left, eps);
    double fv_right = checked_forward_var(SchemeKind::kHeun, c.decay_right,
                                          lambda, c.tau_right, eps);
    return HeunGains{c.beta_left * (1.0 - 1.0 / fv_left),
                     c.beta_right * (1.0 - 1.0 / fv_right)};
}

}  // namespace

EigenTrajectory eigen_recursion(SchemeKind kind, double lambda,
                                const SamplerConfig& cfg) {
    if (!(lambda >= 0.0)) {
        throw DomainError("recursion: lambda must be >= 0");
    }
    std::vector<StepContext> ctx = build_contexts(kind, cfg);
    EigenTrajectory traj;
    traj.lambda = lambda;
    traj.values.resize(cfg.steps + 1);
    traj.values[0] = cfg.init.eigenvalue(lambda, cfg.sched);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        double m = step_multiplier(kind, ctx[k], lambda, cfg.truncation);
        traj.values[k + 1] =
            m * m * traj.values[k] + step_noise_variance(kind, ctx[k]);
    }
    return traj;
}

void spectrum_recursion_visit(
    SchemeKind kind, const CovarianceSpectrum& spectrum,
    const SamplerConfig& cfg,
    const std::function<void(std::size_t, const std::vector<double>&)>& visit) {
    const std::size_t d = spectrum.dim();
    std::vector<StepContext> ctx = build_contexts(kind, cfg);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < d; ++i) {
        row[i] = cfg.init.eigenvalue(spectrum.values[i], cfg.sched);
    }
    visit(0, row);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        double nv = step_noise_variance(kind, ctx[k]);
        for (std::size_t i = 0; i < d; ++i) {
            double m =
                step_multiplier(kind, ctx[k], spectrum.values[i], cfg.truncation);
            row[i] = m * m * row[i] + nv;
        }
        visit(k + 1, row);
    }
}

std::vector<std::vector<double>> spectrum_recursion(
    SchemeKind kind, const CovarianceSpectrum& spectrum,
    const SamplerConfig& cfg) {
    std::vector<std::vector<double>> rows;
    rows.reserve(cfg.steps + 1);
    spectrum_recursion_visit(
        kind, spectrum, cfg,
        [&](std::size_t, const std::vector<double>& row) { rows.push_back(row); });
    return rows;
}

std::vector<StepUpdate> scheme_step_updates(SchemeKind kind, double lambda,
                                            const SamplerConfig& cfg) {
    if (!(lambda >= 0.0)) {
        throw DomainError("step updates: lambda must be >= 0");
    }
    std::vector<StepContext> ctx = build_contexts(kind, cfg);
    std::vector<StepUpdate> updates(cfg.steps);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        StepUpdate& u = updates[k];
        u.delta = ctx[k].delta;
        if (kind == SchemeKind::kHeun) {
            HeunGains g = heun_gains(ctx[k], lambda, cfg.truncation);
            u.g_left = g.left;
            u.g_right = g.right;
        }
        u.mult = step_multiplier(kind, ctx[k], lambda, cfg.truncation);
        u.noise_std = std::sqrt(step_noise_variance(kind, ctx[k]));
    }
    return updates;
}

// Applies one step of the literal scheme dynamics to state x, drawing from
// stream when the scheme is stochastic.
double apply_step(SchemeKind kind, const StepUpdate& u, double x,
                  NormalStream& stream) {
    switch (kind) {
        case SchemeKind::kEm:
        case SchemeKind::kEi:
            return u.mult * x + u.noise_std * stream.next();
        case SchemeKind::kEuler:
            return u.mult * x;
        case SchemeKind::kHeun: {
            // Two-stage form, kept literal so simulations exercise the
            // actual scheme rather than the collapsed multiplier.
            double x_half = x + u.delta * u.g_left * x;
            return x + 0.5 * u.delta * (u.g_left * x + u.g_right * x_half);
        }
    }
    return x;
}

SampleMatrix sample_paths(SchemeKind kind, const CovarianceSpectrum& spectrum,
                          const SamplerConfig& cfg, std::uint64_t seed,
                          std::size_t n_samples) {
    const std::size_t d = spectrum.dim();
    if (d == 0) throw DomainError("sample paths: empty spectrum");
    const std::size_t n_steps = cfg.steps;

    // Precompute per-coordinate update tables; raises DegenerateScore here,
    // before any sampling work.
    std::vector<std::vector<StepUpdate>> updates(d);
    for (std::size_t i = 0; i < d; ++i) {
        updates[i] = scheme_step_updates(kind, spectrum.values[i], cfg);
    }

    std::vector<double> init_std(d);
    for (std::size_t i = 0; i < d; ++i) {
        init_std[i] =
            std::sqrt(cfg.init.eigenvalue(spectrum.values[i], cfg.sched));
    }

    SampleMatrix out = SampleMatrix::zeros(n_samples, d);
    parallel_for(n_samples, [&](std::size_t j) {
        NormalStream stream(seed, j);
        std::vector<double> x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = init_std[i] * stream.next();
        for (std::size_t k = 0; k < n_steps; ++k) {
            for (std::size_t i = 0; i < d; ++i) {
                x[i] = apply_step(kind, updates[i][k], x[i], stream);
            }
        }
        for (std::size_t i = 0; i < d; ++i) out.at(j, i) = x[i];
    });
    return out;
}

std::string trajectory_csv(const EigenTrajectory& trajectory,
                           const SamplerConfig& cfg) {
    TimeGrid grid = time_grid(cfg);
    if (trajectory.values.size() != grid.backward.size()) {
        throw DomainError("trajectory csv: trajectory/config grid mismatch");
    }
    std::string out = "k,t,tau,lambda\n";
    for (std::size_t k = 0; k < trajectory.values.size(); ++k) {
        out += std::to_string(k) + "," + format_full(grid.backward[k]) + "," +
               format_full(grid.forward[k]) + "," +
               format_full(trajectory.values[k]) + "\n";
    }
    return out;
}

}  // namespace gdiff
