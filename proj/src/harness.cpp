#include "cznd/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cznd {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    if (v.size() % 2 == 1) return v[k];
    return 0.5 * (v[k - 1] + v[k]);
}

std::size_t nearest_sample(const std::vector<double>& taus, double tau) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double d = std::abs(taus[i] - tau);
        if (d < best_d) { best_d = d; best = i; }
    }
    return best;
}

void summarize(RunReport& report) {
    std::vector<double> finals, at2;
    report.failures = 0;
    for (const auto& r : report.runs) {
        if (!r.ok) { ++report.failures; continue; }
        finals.push_back(r.final_residual);
        at2.push_back(r.residual_at_2);
    }
    report.median_final_residual = median_of(finals);
    report.median_residual_at_2 = median_of(at2);
}

RunResult execute_run(const ModelSystem& sys, const RVector& x0,
                      const ExperimentSpec& spec, const ResidualFn& res_fn) {
    RunResult out;
    try {
        out.trajectory = integrate(sys, x0, {spec.span_begin, spec.span_end},
                                   spec.integrator, res_fn);
        out.ok = true;
        if (!out.trajectory.residuals.empty()) {
            out.final_residual = out.trajectory.residuals.back();
            out.residual_at_2 =
                out.trajectory.residuals[nearest_sample(out.trajectory.taus, 2.0)];
        }
        if (!out.trajectory.cond_estimates.empty()) {
            auto [lo, hi] = std::minmax_element(out.trajectory.cond_estimates.begin(),
                                                out.trajectory.cond_estimates.end());
            out.min_cond = *lo;
            out.max_cond = *hi;
        }
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

void warn_if_not_unique(const TvsscmeProblem& p, const ExperimentSpec& spec) {
    const auto grid = uniform_grid(spec.span_begin, spec.span_end, 101);
    try {
        const UniquenessReport rep = check_uniqueness(p, grid);
        if (!rep.unique)
            std::cerr << "warning: uniqueness check failed on [" << spec.span_begin
                      << ", " << spec.span_end
                      << "] (eigen_ok=" << rep.eigen_ok << ", det_ok=" << rep.det_ok
                      << "); continuing anyway\n";
    } catch (const std::exception& e) {
        std::cerr << "warning: uniqueness check aborted: " << e.what() << "\n";
    }
}

// Header-safe spelling of a gain: signs read as p/m ("10+20i" -> "10p20i").
std::string sanitize_gain_token(std::string s) {
    for (char& c : s)
        if (c == '+') c = 'p';
        else if (c == '-') c = 'm';
        else if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return s;
}

std::string sanitize_name_token(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return s;
}

}  // namespace

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Gain parse_gain(const std::string& text) {
    // Forms: "R", "R+Ii", "R-Ii" with optional whitespace; R and I are plain
    // floating-point literals.
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("gain: empty string");

    const bool has_i = s.back() == 'i' || s.back() == 'I';
    if (!has_i) {
        std::size_t pos = 0;
        double re = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("gain: trailing junk in '" + text + "'");
        return Gain(re);
    }
    s.pop_back();  // strip the i
    // Split at the last '+'/'-' that is not a leading sign or exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos)
        throw std::invalid_argument("gain: pure-imaginary value '" + text +
                                    "' has no positive real part");
    std::size_t pos = 0;
    const std::string re_text = s.substr(0, split);
    const std::string im_text = s.substr(split);  // keeps the sign
    double re = std::stod(re_text, &pos);
    if (pos != re_text.size())
        throw std::invalid_argument("gain: bad real part in '" + text + "'");
    double im;
    if (im_text == "+") im = 1.0;
    else if (im_text == "-") im = -1.0;
    else {
        im = std::stod(im_text, &pos);
        if (pos != im_text.size())
            throw std::invalid_argument("gain: bad imaginary part in '" + text + "'");
    }
    return Gain(re, im);
}

std::string gain_to_string(const Gain& g) {
    if (g.im == 0.0) return format_full(g.re);
    std::string s = format_full(g.re);
    s += (g.im >= 0.0) ? "+" : "-";
    s += format_full(std::abs(g.im));
    s += "i";
    return s;
}

TvsscmeProblem resolve_problem(const std::string& name_or_path) {
    if (name_or_path == "example3") return example3();
    if (name_or_path.size() > 4 &&
        name_or_path.compare(name_or_path.size() - 4, 4, ".tvp") == 0)
        return load_problem(name_or_path);
    throw ProblemLoadError("unknown problem '" + name_or_path +
                           "' (use 'example3' or a .tvp path)");
}

ModelSystem build_model(const std::string& name, const TvsscmeProblem& p, Gain gamma) {
    auto act = std::make_shared<LinearActivation>();
    if (name == "con-cznd1") return con_cznd1_system(p, gamma, act);
    if (name == "con-cznd2") return con_cznd2_system(p, gamma, act);
    if (name == "con-cznd1-conj") return con_cznd1_conj_system(p, gamma, act);
    throw std::invalid_argument("unknown model '" + name +
                                "' (con-cznd1, con-cznd2, con-cznd1-conj)");
}

ResidualFn make_residual_fn(const TvsscmeProblem& p) {
    const std::size_t m = p.m, n = p.n;
    if (p.exact) {
        auto exact = p.exact;
        return [exact, m, n](double tau, const RVector& x) {
            const RVector star = stack_real_imag(exact(tau));
            double s = 0.0;
            for (std::size_t i = 0; i < x.len(); ++i) {
                const double d = x[i] - star[i];
                s += d * d;
            }
            return std::sqrt(s);
        };
    }
    TimeMatrix F = p.F, A = p.A, C = p.C;
    return [F, A, C, m, n](double tau, const RVector& x) {
        const CMatrix X = lift_state(x, m, n);
        const CMatrix E = X * F.eval_at(tau) - A.eval_at(tau) * conjugate(X) -
                          C.eval_at(tau);
        return frobenius_norm(E);
    };
}

std::vector<RVector> draw_initial_states(const ExperimentSpec& spec, std::size_t dim) {
    SplitMix64 rng(spec.seed);
    std::vector<RVector> states;
    states.reserve(static_cast<std::size_t>(spec.runs));
    for (int r = 0; r < spec.runs; ++r) {
        RVector x0(dim);
        for (std::size_t i = 0; i < dim; ++i)
            x0[i] = rng.next_symmetric(spec.init_range);
        states.push_back(std::move(x0));
    }
    return states;
}

std::vector<std::string> trajectory_csv_header(std::size_t m, std::size_t n) {
    std::vector<std::string> cols = {"tau", "residual", "cond_estimate"};
    char buf[64];
    for (const char* part : {"re", "im"})
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < m; ++i) {
                std::snprintf(buf, sizeof buf, "x_%s_%zu_%zu", part, i + 1, j + 1);
                cols.emplace_back(buf);
            }
    return cols;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          std::size_t m, std::size_t n) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const auto cols = trajectory_csv_header(m, n);
    for (std::size_t c = 0; c < cols.size(); ++c)
        out << (c ? "," : "") << cols[c];
    out << "\n";
    for (std::size_t k = 0; k < traj.taus.size(); ++k) {
        out << format_full(traj.taus[k]);
        out << "," << (k < traj.residuals.size() ? format_full(traj.residuals[k]) : "nan");
        out << ","
            << (k < traj.cond_estimates.size() ? format_full(traj.cond_estimates[k])
                                               : "nan");
        for (std::size_t i = 0; i < traj.states[k].len(); ++i)
            out << "," << format_full(traj.states[k][i]);
        out << "\n";
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    Trajectory traj;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV '" + path + "'");
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            vals.push_back(std::strtod(cell.c_str(), nullptr));
        if (vals.size() < 3) throw std::runtime_error("malformed CSV row in '" + path + "'");
        traj.taus.push_back(vals[0]);
        traj.residuals.push_back(vals[1]);
        traj.cond_estimates.push_back(vals[2]);
        traj.states.emplace_back(std::vector<double>(vals.begin() + 3, vals.end()));
    }
    return traj;
}

void write_uniqueness_csv(const std::string& path, const UniquenessReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::size_t ka = rep.spectrum_aa.empty() ? 0 : rep.spectrum_aa[0].size();
    const std::size_t kf = rep.spectrum_ff.empty() ? 0 : rep.spectrum_ff[0].size();
    out << "tau,abs_det_wr";
    for (std::size_t k = 0; k < ka; ++k)
        out << ",eig_aabar_" << (k + 1) << "_re,eig_aabar_" << (k + 1) << "_im";
    for (std::size_t k = 0; k < kf; ++k)
        out << ",eig_ffbar_" << (k + 1) << "_re,eig_ffbar_" << (k + 1) << "_im";
    out << "\n";
    for (std::size_t i = 0; i < rep.tau_grid.size(); ++i) {
        out << format_full(rep.tau_grid[i]) << ","
            << format_full(i < rep.dets.size() ? std::abs(rep.dets[i]) : 0.0);
        if (i < rep.spectrum_aa.size())
            for (const Complex& z : rep.spectrum_aa[i])
                out << "," << format_full(z.real()) << "," << format_full(z.imag());
        if (i < rep.spectrum_ff.size())
            for (const Complex& z : rep.spectrum_ff[i])
                out << "," << format_full(z.real()) << "," << format_full(z.imag());
        out << "\n";
    }
}

RunReport run_experiment(const ExperimentSpec& spec) {
    const TvsscmeProblem p = resolve_problem(spec.problem);
    warn_if_not_unique(p, spec);
    const ModelSystem sys = build_model(spec.model, p, spec.gamma);
    const ResidualFn res_fn = make_residual_fn(p);
    const auto inits = draw_initial_states(spec, sys.dim);

    RunReport report;
    std::vector<std::future<RunResult>> futures;
    futures.reserve(inits.size());
    for (const RVector& x0 : inits)
        futures.push_back(std::async(std::launch::async, [&, x0] {
            return execute_run(sys, x0, spec, res_fn);
        }));
    for (auto& f : futures) report.runs.push_back(f.get());
    summarize(report);

    if (!spec.out_prefix.empty()) {
        for (std::size_t k = 0; k < report.runs.size(); ++k) {
            if (!report.runs[k].ok) continue;
            const std::string path =
                spec.out_prefix + "_run" + std::to_string(k + 1) + ".csv";
            write_trajectory_csv(path, report.runs[k].trajectory, p.m, p.n);
            report.csv_files.push_back(path);
        }
        const std::string spath = spec.out_prefix + "_summary.csv";
        std::ofstream out(spath, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + spath + "' for writing");
        out << "run,ok,final_residual,residual_at_tau2,min_cond,max_cond,"
               "steps_accepted,steps_rejected,pinv_fallbacks,error\n";
        for (std::size_t k = 0; k < report.runs.size(); ++k) {
            const RunResult& r = report.runs[k];
            out << (k + 1) << "," << (r.ok ? 1 : 0) << ","
                << format_full(r.final_residual) << "," << format_full(r.residual_at_2)
                << "," << format_full(r.min_cond) << "," << format_full(r.max_cond)
                << "," << r.trajectory.stats.steps_accepted << ","
                << r.trajectory.stats.steps_rejected << ","
                << r.trajectory.stats.pinv_fallbacks << ",\"" << r.error << "\"\n";
        }
        report.csv_files.push_back(spath);
    }
    return report;
}

RunReport gamma_sweep(const ExperimentSpec& spec, const std::vector<Gain>& gammas,
                      std::vector<std::vector<Trajectory>>* trajectories) {
    const TvsscmeProblem p = resolve_problem(spec.problem);
    warn_if_not_unique(p, spec);
    const ResidualFn res_fn = make_residual_fn(p);

    std::vector<ModelSystem> systems;
    systems.reserve(gammas.size());
    for (const Gain& g : gammas) systems.push_back(build_model(spec.model, p, g));
    const auto inits = draw_initial_states(spec, systems.front().dim);

    RunReport report;
    if (trajectories) trajectories->assign(inits.size(), {});
    for (std::size_t k = 0; k < inits.size(); ++k) {
        std::vector<std::future<RunResult>> futures;
        for (const ModelSystem& sys : systems)
            futures.push_back(std::async(std::launch::async, [&, k] {
                return execute_run(sys, inits[k], spec, res_fn);
            }));
        std::vector<RunResult> results;
        for (auto& f : futures) results.push_back(f.get());

        if (!spec.out_prefix.empty()) {
            const std::string path =
                spec.out_prefix + "_sweep_run" + std::to_string(k + 1) + ".csv";
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
            out << "tau";
            for (const Gain& g : gammas)
                out << ",res_gamma_" << sanitize_gain_token(gain_to_string(g));
            out << "\n";
            const std::size_t samples = spec.integrator.sample_count;
            for (std::size_t s = 0; s < samples; ++s) {
                bool have_tau = false;
                for (const RunResult& r : results) {
                    if (!r.ok || s >= r.trajectory.taus.size()) continue;
                    if (!have_tau) {
                        out << format_full(r.trajectory.taus[s]);
                        have_tau = true;
                    }
                }
                if (!have_tau) break;
                for (const RunResult& r : results)
                    out << ","
                        << (r.ok && s < r.trajectory.residuals.size()
                                ? format_full(r.trajectory.residuals[s])
                                : "nan");
                out << "\n";
            }
            report.csv_files.push_back(path);
        }
        if (trajectories)
            for (const RunResult& r : results)
                (*trajectories)[k].push_back(r.trajectory);
        for (RunResult& r : results) report.runs.push_back(std::move(r));
    }
    summarize(report);
    return report;
}

RunReport compare_models(const ExperimentSpec& spec,
                         const std::vector<std::string>& models,
                         std::vector<std::vector<Trajectory>>* trajectories) {
    const TvsscmeProblem p = resolve_problem(spec.problem);
    warn_if_not_unique(p, spec);
    const ResidualFn res_fn = make_residual_fn(p);

    std::vector<ModelSystem> systems;
    systems.reserve(models.size());
    for (const std::string& name : models)
        systems.push_back(build_model(name, p, spec.gamma));
    const auto inits = draw_initial_states(spec, systems.front().dim);

    RunReport report;
    if (trajectories) trajectories->assign(inits.size(), {});
    for (std::size_t k = 0; k < inits.size(); ++k) {
        std::vector<std::future<RunResult>> futures;
        for (const ModelSystem& sys : systems)
            futures.push_back(std::async(std::launch::async, [&, k] {
                return execute_run(sys, inits[k], spec, res_fn);
            }));
        std::vector<RunResult> results;
        for (auto& f : futures) results.push_back(f.get());

        if (!spec.out_prefix.empty()) {
            const std::string path =
                spec.out_prefix + "_compare_run" + std::to_string(k + 1) + ".csv";
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
            out << "tau";
            for (const std::string& name : models)
                out << ",log10res_" << sanitize_name_token(name);
            out << "\n";
            const std::size_t samples = spec.integrator.sample_count;
            for (std::size_t s = 0; s < samples; ++s) {
                bool have_tau = false;
                for (const RunResult& r : results) {
                    if (!r.ok || s >= r.trajectory.taus.size()) continue;
                    if (!have_tau) {
                        out << format_full(r.trajectory.taus[s]);
                        have_tau = true;
                    }
                }
                if (!have_tau) break;
                for (const RunResult& r : results) {
                    if (r.ok && s < r.trajectory.residuals.size())
                        out << ","
                            << format_full(std::log10(
                                   std::max(r.trajectory.residuals[s], 1e-300)));
                    else
                        out << ",nan";
                }
                out << "\n";
            }
            report.csv_files.push_back(path);
        }
        if (trajectories)
            for (const RunResult& r : results)
                (*trajectories)[k].push_back(r.trajectory);
        for (RunResult& r : results) report.runs.push_back(std::move(r));
    }
    summarize(report);
    return report;
}

}  // namespace cznd
