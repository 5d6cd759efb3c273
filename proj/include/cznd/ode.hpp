#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "cznd/matrix.hpp"
#include "cznd/models.hpp"

namespace cznd {

struct StepSizeUnderflow : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct MaxStepsExceeded : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct IntegratorConfig {
    double rel_tol = 1e-3;
    double abs_tol = 1e-6;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double h_max = 0.0;  // 0 means span/10
    long max_steps = 1'000'000;
    std::size_t sample_count = 1000;
    bool estimate_condition = true;
};

struct IntegratorStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long pinv_fallbacks = 0;
};

/// Uniformly sampled output of one integration.
struct Trajectory {
    std::vector<double> taus;
    std::vector<RVector> states;
    std::vector<double> residuals;        // empty when no residual_fn given
    std::vector<double> cond_estimates;   // mass condition estimate per sample
    IntegratorStats stats;
};

using ResidualFn = std::function<double(double, const RVector&)>;

struct StepResult {
    RVector x4;  // 4th-order solution
    RVector x5;  // 5th-order solution
    double err;  // mixed abs/rel infinity error norm of x5 - x4
};

/// One Dormand-Prince 4(5) step; exposed for order-verification tests.
StepResult rk45_step(const ModelSystem& sys, double tau, const RVector& x, double h,
                     const IntegratorConfig& cfg = {},
                     IntegratorStats* stats = nullptr);

/// Adaptive integration over [span.first, span.second] with cubic Hermite
/// dense output at sample_count uniform points.
Trajectory integrate(const ModelSystem& sys, const RVector& x0,
                     std::pair<double, double> span, const IntegratorConfig& cfg = {},
                     const ResidualFn& residual_fn = {});

}  // namespace cznd
