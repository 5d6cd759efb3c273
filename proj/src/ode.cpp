#include "cznd/ode.hpp"

#include <algorithm>
#include <cmath>

#include "cznd/linalg.hpp"

namespace cznd {

namespace {

// Dormand-Prince 4(5) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,         500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784,  11.0 / 84,   0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

RVector solve_stage(const ModelSystem& sys, double tau, const RVector& x,
                    IntegratorStats* stats) {
    CMatrix mass = sys.mass_at(tau, x);
    RVector forcing = sys.forcing_at(tau, x);
    try {
        return lu_solve(mass, forcing);
    } catch (const SingularMatrix&) {
        if (stats) ++stats->pinv_fallbacks;
        CMatrix rhs(forcing.len(), 1);
        for (std::size_t i = 0; i < forcing.len(); ++i) rhs.re(i, 0) = forcing[i];
        CMatrix sol = pinv(mass) * rhs;
        // A pseudo-inverse of a rank-deficient mass with inconsistent forcing
        // leaves a nonzero least-squares defect; treat that as unsolvable.
        CMatrix defect = mass * sol - rhs;
        double scale = 1.0 + frobenius_norm(rhs);
        if (frobenius_norm(defect) > 1e-6 * scale)
            throw NumericalFailure("stage solve: mass matrix singular and forcing "
                                   "inconsistent");
        RVector k(forcing.len());
        for (std::size_t i = 0; i < forcing.len(); ++i) k[i] = sol.re(i, 0);
        return k;
    }
}

double error_norm(const RVector& x, const RVector& x5, const RVector& x4,
                  const IntegratorConfig& cfg) {
    double err = 0.0;
    for (std::size_t i = 0; i < x.len(); ++i) {
        double scale =
            cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[i]), std::abs(x5[i]));
        err = std::max(err, std::abs(x5[i] - x4[i]) / scale);
    }
    return err;
}

struct StepWithStages {
    StepResult result;
    RVector k1, k7;  // derivatives at both endpoints (FSAL pair)
};

StepWithStages dp_step(const ModelSystem& sys, double tau, const RVector& x, double h,
                       const IntegratorConfig& cfg, IntegratorStats* stats,
                       const RVector* k1_reuse) {
    std::vector<RVector> k(7);
    for (int s = 0; s < 7; ++s) {
        if (s == 0 && k1_reuse) {
            k[0] = *k1_reuse;
            continue;
        }
        RVector xs = x;
        for (int j = 0; j < s; ++j) {
            if (kA[s][j] == 0.0) continue;
            for (std::size_t i = 0; i < x.len(); ++i) xs[i] += h * kA[s][j] * k[j][i];
        }
        k[s] = solve_stage(sys, tau + kC[s] * h, xs, stats);
    }
    RVector x5 = x, x4 = x;
    for (int s = 0; s < 7; ++s) {
        for (std::size_t i = 0; i < x.len(); ++i) {
            if (kB5[s] != 0.0) x5[i] += h * kB5[s] * k[s][i];
            if (kB4[s] != 0.0) x4[i] += h * kB4[s] * k[s][i];
        }
    }
    double err = error_norm(x, x5, x4, cfg);
    return {{std::move(x4), std::move(x5), err}, std::move(k[0]), std::move(k[6])};
}

double hermite(double t0, double t1, double y0, double y1, double d0, double d1,
               double t) {
    double h = t1 - t0;
    double s = (t - t0) / h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

}  // namespace

StepResult rk45_step(const ModelSystem& sys, double tau, const RVector& x, double h,
                     const IntegratorConfig& cfg, IntegratorStats* stats) {
    return dp_step(sys, tau, x, h, cfg, stats, nullptr).result;
}

Trajectory integrate(const ModelSystem& sys, const RVector& x0,
                     std::pair<double, double> span, const IntegratorConfig& cfg,
                     const ResidualFn& residual_fn) {
    if (x0.len() != sys.dim)
        throw DimensionError("integrate: state length != system dimension");
    const double t0 = span.first, t1 = span.second;
    if (!(t1 > t0)) throw std::invalid_argument("integrate: need span end > start");

    const double h_max = cfg.h_max > 0.0 ? cfg.h_max : (t1 - t0) / 10.0;
    Trajectory traj;
    traj.taus = std::vector<double>(cfg.sample_count);
    for (std::size_t i = 0; i < cfg.sample_count; ++i)
        traj.taus[i] = cfg.sample_count == 1
                           ? t0
                           : t0 + (t1 - t0) * static_cast<double>(i) /
                                      static_cast<double>(cfg.sample_count - 1);
    traj.states.reserve(cfg.sample_count);

    auto record_sample = [&](double tau, const RVector& x) {
        traj.states.push_back(x);
        if (residual_fn) traj.residuals.push_back(residual_fn(tau, x));
        if (cfg.estimate_condition)
            traj.cond_estimates.push_back(svd_condition(sys.mass_at(tau, x)));
    };

    double t = t0;
    RVector x = x0;
    double h = std::min(cfg.h_init, h_max);
    std::size_t next_sample = 0;

    if (!traj.taus.empty() && traj.taus[0] <= t0) {
        record_sample(t0, x);
        next_sample = 1;
    }

    RVector k_start = solve_stage(sys, t, x, &traj.stats);
    long steps = 0;
    while (t < t1) {
        if (++steps > cfg.max_steps)
            throw MaxStepsExceeded("integrate: exceeded max_steps = " +
                                   std::to_string(cfg.max_steps));
        h = std::min(h, t1 - t);
        StepWithStages step = dp_step(sys, t, x, h, cfg, &traj.stats, &k_start);
        if (step.result.err > 1.0) {
            ++traj.stats.steps_rejected;
            double factor =
                std::clamp(0.9 * std::pow(step.result.err, -0.2), 0.2, 5.0);
            h *= factor;
            if (h < cfg.h_min)
                throw StepSizeUnderflow("integrate: step size underflow at tau = " +
                                        std::to_string(t));
            continue;
        }
        ++traj.stats.steps_accepted;
        double t_new = t + h;
        const RVector& x_new = step.result.x5;
        // Dense output between accepted steps (first-same-as-last reuse).
        while (next_sample < traj.taus.size() && traj.taus[next_sample] <= t_new) {
            double ts = traj.taus[next_sample];
            RVector xi(x.len());
            for (std::size_t i = 0; i < x.len(); ++i)
                xi[i] = hermite(t, t_new, x[i], x_new[i], step.k1[i], step.k7[i], ts);
            record_sample(ts, xi);
            ++next_sample;
        }
        x = x_new;
        t = t_new;
        k_start = step.k7;
        double factor = std::clamp(
            0.9 * std::pow(std::max(step.result.err, 1e-10), -0.2), 0.2, 5.0);
        h = std::min(h * factor, h_max);
        if (h < cfg.h_min)
            throw StepSizeUnderflow("integrate: step size underflow at tau = " +
                                    std::to_string(t));
    }
    // Numerical round-off can leave the final sample un-emitted.
    while (next_sample < traj.taus.size()) {
        record_sample(traj.taus[next_sample], x);
        ++next_sample;
    }
    return traj;
}

}  // namespace cznd
