// tvsscme: benchmark runner for time-variant Sylvester-type matrix equations
// with conjugate terms, solved by continuous zeroing-dynamics models.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cznd/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitProblemLoad = 3;
constexpr int kExitAllRunsFailed = 4;

struct CommonOpts {
    std::string problem = "example3";
    std::string model = "con-cznd1-conj";
    std::string gamma = "10";
    std::string span = "0:10";
    int runs = 8;
    double init_range = 5.0;
    std::uint64_t seed = 0;
    double rel_tol = 1e-3;
    double abs_tol = 1e-6;
    std::size_t samples = 1000;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_model = true) {
    cmd->add_option("--problem", o.problem, "builtin name ('example3') or .tvp path");
    if (with_model)
        cmd->add_option("--model", o.model,
                        "con-cznd1 | con-cznd2 | con-cznd1-conj");
    cmd->add_option("--gamma", o.gamma, "gain, e.g. 10, 10+20i, 10-20i");
    cmd->add_option("--span", o.span, "integration span a:b (default 0:10)");
    cmd->add_option("--runs", o.runs, "number of random initial states")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--init-range", o.init_range,
                    "initial entries uniform in [-r, r]")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "PRNG seed (SplitMix64)");
    cmd->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "integrator absolute tolerance");
    cmd->add_option("--samples", o.samples, "uniform output samples per run");
    cmd->add_option("--out", o.out, "output CSV path prefix");
}

std::pair<double, double> parse_span(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--span", "expected a:b, got '" + text + "'");
    std::size_t pa = 0, pb = 0;
    const std::string sa = text.substr(0, colon), sb = text.substr(colon + 1);
    double a = std::stod(sa, &pa);
    double b = std::stod(sb, &pb);
    if (pa != sa.size() || pb != sb.size() || !(b > a))
        throw CLI::ValidationError("--span", "expected a:b with b > a, got '" + text + "'");
    return {a, b};
}

cznd::ExperimentSpec build_spec(const CommonOpts& o) {
    cznd::ExperimentSpec spec;
    spec.problem = o.problem;
    spec.model = o.model;
    spec.gamma = cznd::parse_gain(o.gamma);
    std::tie(spec.span_begin, spec.span_end) = parse_span(o.span);
    spec.runs = o.runs;
    spec.init_range = o.init_range;
    spec.seed = o.seed;
    spec.integrator.rel_tol = o.rel_tol;
    spec.integrator.abs_tol = o.abs_tol;
    spec.integrator.sample_count = o.samples;
    spec.out_prefix = o.out;
    return spec;
}

void print_report(const cznd::RunReport& report) {
    for (std::size_t k = 0; k < report.runs.size(); ++k) {
        const cznd::RunResult& r = report.runs[k];
        if (r.ok)
            std::printf("run %2zu: final residual %.6g, residual(tau=2) %.6g, "
                        "cond [%.3g, %.3g], steps %ld/%ld accepted/rejected\n",
                        k + 1, r.final_residual, r.residual_at_2, r.min_cond,
                        r.max_cond, r.trajectory.stats.steps_accepted,
                        r.trajectory.stats.steps_rejected);
        else
            std::printf("run %2zu: FAILED (%s)\n", k + 1, r.error.c_str());
    }
    std::printf("median final residual: %.6g\n", report.median_final_residual);
    std::printf("median residual at tau=2: %.6g\n", report.median_residual_at_2);
    if (report.failures > 0)
        std::printf("failed runs: %d of %zu\n", report.failures, report.runs.size());
    for (const std::string& f : report.csv_files) std::printf("wrote %s\n", f.c_str());
}

int report_exit(const cznd::RunReport& report) {
    if (!report.runs.empty() &&
        report.failures == static_cast<int>(report.runs.size())) {
        std::fprintf(stderr, "error: all runs failed numerically\n");
        return kExitAllRunsFailed;
    }
    return kExitOk;
}

int cmd_run(const CommonOpts& o) {
    const auto report = cznd::run_experiment(build_spec(o));
    print_report(report);
    return report_exit(report);
}

int cmd_sweep(const CommonOpts& o, const std::vector<std::string>& gamma_texts) {
    if (gamma_texts.empty())
        throw CLI::ValidationError("--gammas", "at least one gain is required");
    std::vector<cznd::Gain> gains;
    gains.reserve(gamma_texts.size());
    for (const std::string& g : gamma_texts) gains.push_back(cznd::parse_gain(g));
    const auto report = cznd::gamma_sweep(build_spec(o), gains);
    print_report(report);
    return report_exit(report);
}

int cmd_compare(const CommonOpts& o, const std::vector<std::string>& models) {
    if (models.empty())
        throw CLI::ValidationError("--models", "at least one model is required");
    const auto report = cznd::compare_models(build_spec(o), models);
    print_report(report);
    return report_exit(report);
}

int cmd_check_uniqueness(const CommonOpts& o, std::size_t grid_points) {
    const cznd::TvsscmeProblem p = cznd::resolve_problem(o.problem);
    const auto [a, b] = parse_span(o.span);
    if (grid_points < 2)
        std::fprintf(stderr, "warning: grid of %zu point(s) gives minimal coverage\n",
                     grid_points);
    const auto grid = cznd::uniform_grid(a, b, grid_points);
    const cznd::UniquenessReport rep = cznd::check_uniqueness(p, grid);
    std::printf("grid: %zu points on [%g, %g]\n", grid.size(), a, b);
    std::printf("min eigenvalue gap (A*conj(A) vs F*conj(F) spectra): %.6g\n",
                rep.min_eigen_gap);
    std::printf("min |det W_R|: %.6g\n", rep.min_abs_det);
    std::printf("det sign change: %s\n", rep.det_sign_change ? "yes" : "no");
    std::printf("eigen criterion: %s\n", rep.eigen_ok ? "ok" : "FAILED");
    std::printf("det criterion: %s\n", rep.det_ok ? "ok" : "FAILED");
    std::printf("verdict: solution is %sunique on the grid\n", rep.unique ? "" : "NOT ");
    if (!o.out.empty()) {
        const std::string path = o.out + "_uniqueness.csv";
        cznd::write_uniqueness_csv(path, rep);
        std::printf("wrote %s\n", path.c_str());
    }
    return kExitOk;
}

int cmd_print_problem(const CommonOpts& o) {
    const cznd::TvsscmeProblem p = cznd::resolve_problem(o.problem);
    std::printf("dims: m=%zu n=%zu (X is %zux%zu, stacked state length %zu)\n", p.m,
                p.n, p.m, p.n, 2 * p.m * p.n);
    auto dump = [](const char* name, const cznd::TimeMatrix& tm) {
        std::printf("[%s] %zux%zu\n", name, tm.rows(), tm.cols());
        for (std::size_t i = 0; i < tm.rows(); ++i)
            for (std::size_t j = 0; j < tm.cols(); ++j) {
                const auto& e = tm.entry(i, j);
                std::printf("  (%zu,%zu): re = %s ; im = %s\n", i + 1, j + 1,
                            e.re_src.empty() ? "<closure>" : e.re_src.c_str(),
                            e.im_src.empty() ? "<closure>" : e.im_src.c_str());
            }
    };
    dump("F", p.F);
    dump("A", p.A);
    dump("C", p.C);
    std::printf("exact solution: %s\n", p.exact ? "available" : "not provided");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-variant Sylvester-conjugate matrix equation benchmark"};
    app.require_subcommand(1);

    CommonOpts run_opts, sweep_opts, cmp_opts, uniq_opts, print_opts;
    std::vector<std::string> sweep_gammas;
    std::vector<std::string> cmp_models;
    std::size_t grid_points = 1001;

    CLI::App* run = app.add_subcommand("run", "integrate one model from random X0");
    add_common(run, run_opts);

    CLI::App* sweep = app.add_subcommand(
        "sweep-gamma", "one model, several gains, shared initial states");
    add_common(sweep, sweep_opts);
    sweep->add_option("--gammas", sweep_gammas, "gains to sweep, e.g. 10 10+20i 10-20i")
        ->required();

    CLI::App* cmp =
        app.add_subcommand("compare", "several models, shared initial states");
    add_common(cmp, cmp_opts, /*with_model=*/false);
    cmp->add_option("--models", cmp_models, "models to compare")->required();

    CLI::App* uniq = app.add_subcommand("check-uniqueness",
                                        "grid check of the solvability conditions");
    add_common(uniq, uniq_opts, /*with_model=*/false);
    uniq->add_option("--grid-points", grid_points, "grid resolution (default 1001)");

    CLI::App* print =
        app.add_subcommand("print-problem", "show the problem's entry expressions");
    add_common(print, print_opts, /*with_model=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_gammas);
        if (cmp->parsed()) return cmd_compare(cmp_opts, cmp_models);
        if (uniq->parsed()) return cmd_check_uniqueness(uniq_opts, grid_points);
        if (print->parsed()) return cmd_print_problem(print_opts);
    } catch (const cznd::ComplexGainUnsupported& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const cznd::ProblemLoadError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitProblemLoad;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
