#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gdiff/adsn.hpp"
#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"
#include "gdiff/exact.hpp"
#include "gdiff/manifest.hpp"
#include "gdiff/montecarlo.hpp"
#include "gdiff/ppm.hpp"
#include "gdiff/schedule.hpp"
#include "gdiff/schemes.hpp"
#include "gdiff/spectrum.hpp"
#include "gdiff/svg.hpp"
#include "gdiff/wasserstein.hpp"

// Exit codes: 0 success, 1 validation failure, 2 usage, 3 domain error
// (ingestion, degenerate score), 4 numeric failure.

namespace {

int run_cli(const std::vector<std::string>& args);

struct ScheduleFlags {
    std::string kind = "linear";
    double beta_min = 0.05;
    double beta_max = 10.0;
    double horizon = 1.0;
};

gdiff::NoiseSchedule make_schedule(const ScheduleFlags& f) {
    if (f.kind == "constant") {
        // Constant schedules take their rate from --beta-min.
        return gdiff::NoiseSchedule::constant(f.beta_min, f.horizon);
    }
    return gdiff::NoiseSchedule::linear(f.beta_min, f.beta_max, f.horizon);
}

gdiff::InitLaw make_init(const std::string& name, double c0) {
    if (name == "N0") return gdiff::InitLaw::stationary();
    if (name == "pT") return gdiff::InitLaw::forward_at_horizon();
    return gdiff::InitLaw::custom(c0);
}

void emit(const std::string& command, const std::vector<std::string>& args,
          const std::string& path, const std::string& content) {
    gdiff::write_file(path, content);
    gdiff::write_manifest(gdiff::make_manifest(command, args, path));
    std::cout << "wrote " << path << "\n";
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi >= lo)) {
        throw gdiff::DomainError("log grid requires 0 < lambda-min <= lambda-max");
    }
    std::vector<double> grid(points);
    double llo = std::log(lo);
    double lhi = std::log(hi);
    for (std::size_t i = 0; i < points; ++i) {
        double f = points == 1 ? 0.0
                               : static_cast<double>(i) /
                                     static_cast<double>(points - 1);
        grid[i] = std::exp(llo + f * (lhi - llo));
    }
    if (points > 1) {
        grid.front() = lo;
        grid.back() = hi;
    }
    return grid;
}

// Zero-mean texture samples flattened one per row, channel-major
// (column c*M*N + pixel index), matching the generic sample-matrix format.
gdiff::SampleMatrix flatten_samples(const std::vector<gdiff::Image>& samples) {
    if (samples.empty()) return gdiff::SampleMatrix{};
    std::size_t pixels = samples[0].rows * samples[0].cols;
    gdiff::SampleMatrix m = gdiff::SampleMatrix::zeros(samples.size(), 3 * pixels);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        for (std::size_t c = 0; c < 3; ++c) {
            for (std::size_t p = 0; p < pixels; ++p) {
                m.at(k, c * pixels + p) = samples[k].channels[c][p];
            }
        }
    }
    return m;
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"exact marginal laws and Wasserstein errors of Gaussian "
                 "diffusion samplers"};
    app.set_version_flag("--version", gdiff::kArtifactVersion);
    app.require_subcommand(1);

    ScheduleFlags sched_flags;
    app.add_option("--beta-kind", sched_flags.kind, "noise-rate shape")
        ->check(CLI::IsMember({"constant", "linear"}))
        ->capture_default_str();
    app.add_option("--beta-min", sched_flags.beta_min,
                   "rate at t=0 (the rate itself for constant schedules)")
        ->capture_default_str();
    app.add_option("--beta-max", sched_flags.beta_max, "rate at t=T")
        ->capture_default_str();
    app.add_option("--T", sched_flags.horizon, "forward horizon")
        ->capture_default_str();

    int exit_code = 0;
    const std::vector<std::string> source_names = {"sde", "ode",    "em",
                                                   "ei",  "euler",  "heun"};

    // ---- curve ----------------------------------------------------------
    auto* curve = app.add_subcommand(
        "curve", "W2 between source marginals and the forward law on the "
                 "sampler grid");
    curve->fallthrough();
    struct {
        std::vector<std::string> sources;
        std::string spectrum;
        std::size_t steps = 1000;
        double eps = 1e-3;
        std::string init = "N0";
        double c0 = 1.0;
        std::string out = "curve.csv";
        std::string svg;
    } cv;
    curve->add_option("--source", cv.sources, "marginal source(s)")
        ->required()
        ->check(CLI::IsMember(source_names));
    curve->add_option("--spectrum", cv.spectrum, "data spectrum CSV")->required();
    curve->add_option("--N", cv.steps, "grid steps")->check(CLI::PositiveNumber);
    curve->add_option("--eps", cv.eps, "truncation time");
    curve->add_option("--init", cv.init, "reverse-time initialization")
        ->check(CLI::IsMember({"N0", "pT", "custom"}));
    curve->add_option("--c0", cv.c0, "custom init eigenvalue");
    curve->add_option("--out", cv.out, "output CSV")->capture_default_str();
    curve->add_option("--svg", cv.svg, "also render a log-y SVG plot");
    curve->callback([&] {
        gdiff::CovarianceSpectrum data = gdiff::load_spectrum(cv.spectrum);
        gdiff::SamplerConfig cfg{make_schedule(sched_flags), cv.steps, cv.eps,
                                 make_init(cv.init, cv.c0)};
        std::vector<gdiff::ErrorCurve> curves;
        for (const std::string& name : cv.sources) {
            curves.push_back(
                gdiff::error_curve(gdiff::source_from_name(name), data, cfg));
        }
        emit("curve", args, cv.out, gdiff::curves_csv(curves));
        if (!cv.svg.empty()) {
            try {
                emit("curve", args, cv.svg, gdiff::curves_svg(curves));
            } catch (const gdiff::DomainError& e) {
                std::cerr << "svg skipped: " << e.what() << "\n";
            }
        }
    });

    // ---- ablation -------------------------------------------------------
    auto* ablation = app.add_subcommand(
        "ablation", "final-time W2 table over schemes x N x eps x init");
    ablation->fallthrough();
    struct {
        std::string spectrum;
        std::vector<std::size_t> steps = {50, 250, 500, 1000};
        std::vector<double> eps = {0.0, 1e-5, 1e-4, 1e-3};
        std::vector<std::string> inits = {"pT", "N0"};
        std::string out = "ablation.csv";
    } ab;
    ablation->add_option("--spectrum", ab.spectrum, "data spectrum CSV")
        ->required();
    ablation->add_option("--N", ab.steps, "step counts");
    ablation->add_option("--eps", ab.eps, "truncation times");
    ablation->add_option("--init", ab.inits, "initializations")
        ->check(CLI::IsMember({"N0", "pT"}));
    ablation->add_option("--out", ab.out, "output CSV")->capture_default_str();
    ablation->callback([&] {
        gdiff::CovarianceSpectrum data = gdiff::load_spectrum(ab.spectrum);
        std::vector<gdiff::InitLaw> inits;
        for (const std::string& name : ab.inits) inits.push_back(make_init(name, 1.0));
        std::vector<gdiff::AblationCell> cells = gdiff::ablation_table(
            data,
            {gdiff::SchemeKind::kEm, gdiff::SchemeKind::kEi,
             gdiff::SchemeKind::kEuler, gdiff::SchemeKind::kHeun},
            ab.steps, ab.eps, inits, make_schedule(sched_flags));
        emit("ablation", args, ab.out, gdiff::table_csv(cells));
    });

    // ---- contrib --------------------------------------------------------
    auto* contrib = app.add_subcommand(
        "contrib", "per-eigenvalue contribution to the final W2 error");
    contrib->fallthrough();
    struct {
        std::string source = "sde";
        double lambda_min = 1e-6;
        double lambda_max = 1e3;
        std::size_t points = 200;
        std::size_t steps = 1000;
        double eps = 1e-3;
        std::string init = "N0";
        double c0 = 1.0;
        std::string out = "contrib.csv";
    } cb;
    contrib->add_option("--source", cb.source, "marginal source")
        ->required()
        ->check(CLI::IsMember(source_names));
    contrib->add_option("--lambda-min", cb.lambda_min, "sweep lower end")
        ->capture_default_str();
    contrib->add_option("--lambda-max", cb.lambda_max, "sweep upper end")
        ->capture_default_str();
    contrib->add_option("--points", cb.points, "log-spaced grid size")
        ->check(CLI::PositiveNumber);
    contrib->add_option("--N", cb.steps, "grid steps")->check(CLI::PositiveNumber);
    contrib->add_option("--eps", cb.eps, "truncation time");
    contrib->add_option("--init", cb.init, "reverse-time initialization")
        ->check(CLI::IsMember({"N0", "pT", "custom"}));
    contrib->add_option("--c0", cb.c0, "custom init eigenvalue");
    contrib->add_option("--out", cb.out, "output CSV")->capture_default_str();
    contrib->callback([&] {
        gdiff::SamplerConfig cfg{make_schedule(sched_flags), cb.steps, cb.eps,
                                 make_init(cb.init, cb.c0)};
        std::vector<gdiff::ContributionPoint> points = gdiff::eigen_contribution(
            gdiff::source_from_name(cb.source),
            log_grid(cb.lambda_min, cb.lambda_max, cb.points), cfg);
        emit("contrib", args, cb.out, gdiff::contribution_csv(points));
    });

    // ---- adsn -----------------------------------------------------------
    auto* adsn = app.add_subcommand("adsn", "Gaussian microtexture model");
    adsn->fallthrough();
    adsn->require_subcommand(1);

    auto* aspec = adsn->add_subcommand("spectrum",
                                       "per-frequency eigenvalues of an image");
    aspec->fallthrough();
    struct {
        std::string image;
        std::string out = "adsn_spectrum.csv";
    } as;
    aspec->add_option("--image", as.image, "exemplar PPM (P6)")->required();
    aspec->add_option("--out", as.out, "output CSV")->capture_default_str();
    aspec->callback([&] {
        gdiff::Texton t = gdiff::texton_from_image(gdiff::read_ppm(as.image));
        emit("adsn spectrum", args, as.out,
             gdiff::adsn_spectrum_csv(gdiff::adsn_spectrum(t)));
    });

    auto* asample = adsn->add_subcommand("sample", "exact texture samples");
    asample->fallthrough();
    struct {
        std::string image;
        std::uint64_t seed = 0;
        std::size_t n = 1;
        std::string out = "adsn_samples.csv";
        std::string ppm;
    } sm;
    asample->add_option("--image", sm.image, "exemplar PPM (P6)")->required();
    asample->add_option("--seed", sm.seed, "RNG seed")->capture_default_str();
    asample->add_option("--n", sm.n, "sample count")->check(CLI::PositiveNumber);
    asample->add_option("--out", sm.out,
                        "zero-mean samples, one per row, channel-major")
        ->capture_default_str();
    asample->add_option("--ppm", sm.ppm,
                        "also write mean-added previews <prefix><k>.ppm");
    asample->callback([&] {
        gdiff::Texton t = gdiff::texton_from_image(gdiff::read_ppm(sm.image));
        std::vector<gdiff::Image> samples = gdiff::adsn_sample(t, sm.seed, sm.n);
        gdiff::save_samples(sm.out, flatten_samples(samples));
        gdiff::write_manifest(gdiff::make_manifest("adsn sample", args, sm.out));
        std::cout << "wrote " << sm.out << "\n";
        for (std::size_t k = 0; k < samples.size() && !sm.ppm.empty(); ++k) {
            gdiff::write_ppm(sm.ppm + std::to_string(k) + ".ppm",
                             gdiff::add_mean(samples[k], t));
        }
    });

    auto* aest = adsn->add_subcommand(
        "estimate", "empirical per-frequency eigenvalue triples from exact "
                    "samples");
    aest->fallthrough();
    struct {
        std::string image;
        std::uint64_t seed = 0;
        std::size_t n = 10000;
        std::string norm = "unbiased";
        std::string out = "adsn_estimates.csv";
    } es;
    aest->add_option("--image", es.image, "exemplar PPM (P6)")->required();
    aest->add_option("--seed", es.seed, "RNG seed")->capture_default_str();
    aest->add_option("--n", es.n, "sample count")->check(CLI::PositiveNumber);
    aest->add_option("--norm", es.norm, "estimator normalization")
        ->check(CLI::IsMember({"unbiased", "one-third"}))
        ->capture_default_str();
    aest->add_option("--out", es.out, "output CSV")->capture_default_str();
    aest->callback([&] {
        gdiff::Texton t = gdiff::texton_from_image(gdiff::read_ppm(es.image));
        gdiff::EigenEstimates est = gdiff::estimate_exact_sampler(
            t, gdiff::frequency_basis(t), es.seed, es.n,
            es.norm == "one-third" ? gdiff::EstimatorNormalization::kOneThird
                                   : gdiff::EstimatorNormalization::kUnbiased);
        emit("adsn estimate", args, es.out, gdiff::estimates_csv(est));
    });

    auto* aw2 = adsn->add_subcommand(
        "emp-w2", "empirical W2 between estimates and a model spectrum");
    aw2->fallthrough();
    struct {
        std::string estimates;
        std::string spectrum;
        std::string out = "adsn_w2.csv";
    } aw;
    aw2->add_option("--estimates", aw.estimates, "estimates CSV")->required();
    aw2->add_option("--spectrum", aw.spectrum, "model spectrum CSV")->required();
    aw2->add_option("--out", aw.out, "output CSV")->capture_default_str();
    aw2->callback([&] {
        double w2 = gdiff::empirical_w2(gdiff::load_estimates(aw.estimates),
                                        gdiff::load_adsn_spectrum(aw.spectrum));
        emit("adsn emp-w2", args, aw.out, "w2\n" + gdiff::format_full(w2) + "\n");
        std::cout << "w2 = " << gdiff::format_short(w2) << "\n";
    });

    // ---- validate -------------------------------------------------------
    auto* validate = app.add_subcommand(
        "validate", "Monte-Carlo check of analytic variances against the "
                    "literal dynamics");
    validate->fallthrough();
    struct {
        std::string scheme;
        std::string continuous;
        double lambda = 1.0;
        std::size_t steps = 1000;
        double eps = 1e-3;
        std::string init = "N0";
        double c0 = 1.0;
        std::size_t samples = 100000;
        std::uint64_t seed = 0;
        double z_max = 4.0;
        std::string out = "validation.csv";
    } vl;
    auto* scheme_opt =
        validate->add_option("--scheme", vl.scheme, "discretization scheme")
            ->check(CLI::IsMember({"em", "ei", "euler", "heun"}));
    validate->add_option("--continuous", vl.continuous, "idealized generator")
        ->check(CLI::IsMember({"sde", "ode"}))
        ->excludes(scheme_opt);
    validate->add_option("--lambda", vl.lambda, "data eigenvalue")->required();
    validate->add_option("--N", vl.steps, "steps (grid points for continuous)")
        ->check(CLI::PositiveNumber);
    validate->add_option("--eps", vl.eps, "truncation time");
    validate->add_option("--init", vl.init, "reverse-time initialization")
        ->check(CLI::IsMember({"N0", "pT", "custom"}));
    validate->add_option("--c0", vl.c0, "custom init eigenvalue");
    validate->add_option("--samples", vl.samples, "Monte-Carlo sample count")
        ->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}))
        ->capture_default_str();
    validate->add_option("--seed", vl.seed, "RNG seed")->capture_default_str();
    validate->add_option("--zmax", vl.z_max, "per-row z threshold")
        ->capture_default_str();
    validate->add_option("--out", vl.out, "report CSV")->capture_default_str();
    validate->callback([&] {
        if (vl.scheme.empty() && vl.continuous.empty()) {
            throw CLI::RequiredError("--scheme or --continuous");
        }
        gdiff::SamplerConfig cfg{make_schedule(sched_flags), vl.steps, vl.eps,
                                 make_init(vl.init, vl.c0)};
        gdiff::ValidationReport report;
        if (!vl.scheme.empty()) {
            report = gdiff::validate_scheme(gdiff::scheme_from_name(vl.scheme),
                                            vl.lambda, cfg, vl.samples, vl.seed,
                                            vl.z_max);
        } else {
            double c0 = cfg.init.eigenvalue(vl.lambda, cfg.sched);
            report = gdiff::validate_continuous(
                gdiff::source_from_name(vl.continuous), vl.lambda, c0,
                vl.samples, vl.seed, gdiff::time_grid(cfg).forward, cfg.sched,
                vl.z_max);
        }
        emit("validate", args, vl.out, gdiff::report_csv(report));
        std::cout << (report.pass ? "PASS" : "FAIL") << " max|z| = "
                  << gdiff::format_short(report.max_abs_z) << " over "
                  << report.rows.size() << " rows\n";
        if (!report.note.empty()) std::cout << report.note << "\n";
        if (!report.pass) exit_code = 1;
    });

    // ---- spectrum -------------------------------------------------------
    auto* spectrum = app.add_subcommand("spectrum", "spectrum ingestion");
    spectrum->fallthrough();
    spectrum->require_subcommand(1);

    auto* sload = spectrum->add_subcommand(
        "load", "validate and canonicalize a spectrum file");
    sload->fallthrough();
    struct {
        std::string in;
        std::string out = "spectrum.csv";
    } sl;
    sload->add_option("--in", sl.in, "input spectrum CSV")->required();
    sload->add_option("--out", sl.out, "output CSV")->capture_default_str();
    sload->callback([&] {
        gdiff::CovarianceSpectrum s = gdiff::load_spectrum(sl.in);
        gdiff::save_spectrum(sl.out, s);
        gdiff::write_manifest(gdiff::make_manifest("spectrum load", args, sl.out));
        std::cout << "wrote " << sl.out << "\n";
    });

    auto* semp = spectrum->add_subcommand(
        "empirical", "eigenvalues of the centered covariance of a sample "
                     "matrix");
    semp->fallthrough();
    struct {
        std::string data;
        std::string out = "spectrum.csv";
    } se;
    semp->add_option("--data", se.data, "samples CSV, one row per sample")
        ->required();
    semp->add_option("--out", se.out, "output CSV")->capture_default_str();
    semp->callback([&] {
        gdiff::CovarianceSpectrum s =
            gdiff::empirical_spectrum(gdiff::load_samples(se.data));
        gdiff::save_spectrum(se.out, s);
        gdiff::write_manifest(
            gdiff::make_manifest("spectrum empirical", args, se.out));
        std::cout << "wrote " << se.out << "\n";
    });

    auto* ssynth = spectrum->add_subcommand("synth", "synthetic spectra");
    ssynth->fallthrough();
    struct {
        std::string kind;
        std::size_t d = 100;
        double lambda_min = 1e-6;
        double lambda_max = 1e3;
        std::uint64_t seed = 0;
        std::string out = "spectrum.csv";
    } sy;
    ssynth->add_option("--kind", sy.kind, "spectrum family")
        ->required()
        ->check(CLI::IsMember({"single", "geometric", "loguniform"}));
    ssynth->add_option("--d", sy.d, "dimension")->check(CLI::PositiveNumber);
    ssynth->add_option("--lambda-min", sy.lambda_min, "smallest eigenvalue")
        ->capture_default_str();
    ssynth->add_option("--lambda-max", sy.lambda_max, "largest eigenvalue")
        ->capture_default_str();
    ssynth->add_option("--seed", sy.seed, "RNG seed (loguniform)")
        ->capture_default_str();
    ssynth->add_option("--out", sy.out, "output CSV")->capture_default_str();
    ssynth->callback([&] {
        gdiff::SynthKind kind = gdiff::SynthKind::kSingle;
        if (sy.kind == "geometric") kind = gdiff::SynthKind::kGeometric;
        if (sy.kind == "loguniform") kind = gdiff::SynthKind::kLogUniform;
        gdiff::CovarianceSpectrum s = gdiff::synthetic_spectrum(
            kind, sy.d, sy.lambda_min, sy.lambda_max, sy.seed);
        gdiff::save_spectrum(sy.out, s);
        gdiff::write_manifest(
            gdiff::make_manifest("spectrum synth", args, sy.out));
        std::cout << "wrote " << sy.out << "\n";
    });

    // ---- replay ---------------------------------------------------------
    auto* replay = app.add_subcommand(
        "replay", "re-run the command recorded in a manifest");
    replay->fallthrough();
    struct {
        std::string manifest;
    } rp;
    replay->add_option("--manifest", rp.manifest, "manifest file")->required();
    replay->callback([&] {
        gdiff::RunManifest m = gdiff::load_manifest(rp.manifest);
        if (m.command == "replay") {
            throw gdiff::DomainError("refusing to replay a replay manifest");
        }
        exit_code = run_cli(m.args);
    });

    std::vector<const char*> argv;
    argv.push_back("gdiff");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const gdiff::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const gdiff::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args);
}
