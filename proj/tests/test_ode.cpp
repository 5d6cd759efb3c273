#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cznd/harness.hpp"
#include "cznd/ode.hpp"

using namespace cznd;

namespace {

ModelSystem scalar_system(std::function<double(double, double)> f,
                          std::string label = "scalar") {
    ModelSystem sys;
    sys.dim = 1;
    sys.label = std::move(label);
    sys.mass_at = [](double, const RVector&) { return CMatrix::identity(1); };
    sys.forcing_at = [f](double tau, const RVector& x) {
        RVector r(1);
        r[0] = f(tau, x[0]);
        return r;
    };
    return sys;
}

IntegratorConfig tight() {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    cfg.sample_count = 21;
    cfg.estimate_condition = false;
    return cfg;
}

}  // namespace

TEST_CASE("exponential decay matches the closed form") {
    ModelSystem sys = scalar_system([](double, double y) { return -10.0 * y; });
    RVector y0(1);
    y0[0] = 1.0;
    Trajectory traj = integrate(sys, y0, {0.0, 1.0}, tight());
    REQUIRE(traj.taus.size() == 21);
    for (std::size_t k = 0; k < traj.taus.size(); ++k)
        CHECK(std::abs(traj.states[k][0] - std::exp(-10.0 * traj.taus[k])) < 1e-6);
    CHECK(traj.stats.steps_accepted > 0);
}

TEST_CASE("polynomial right-hand sides are integrated exactly") {
    // y' = 5 t^4, y(0) = 0 -> y = t^5; the 5th-order steps track this to
    // rounding error, so the final sample (a step endpoint) is exact.  The
    // interior samples come from the cubic Hermite dense output and are only
    // tolerance-accurate.
    ModelSystem sys = scalar_system([](double tau, double) { return 5.0 * std::pow(tau, 4); });
    IntegratorConfig cfg;
    cfg.sample_count = 6;
    cfg.estimate_condition = false;
    Trajectory traj = integrate(sys, RVector(1), {0.0, 2.0}, cfg);
    CHECK(traj.states.back()[0] == doctest::Approx(32.0).epsilon(1e-12));
    for (std::size_t k = 0; k < traj.taus.size(); ++k)
        CHECK(std::abs(traj.states[k][0] - std::pow(traj.taus[k], 5)) <
              2e-3 * (1.0 + std::pow(traj.taus[k], 5)));

    // shrinking the step cap tightens the dense output (interpolation error
    // scales like h^4)
    cfg.h_max = 0.02;
    Trajectory fine = integrate(sys, RVector(1), {0.0, 2.0}, cfg);
    for (std::size_t k = 0; k < fine.taus.size(); ++k)
        CHECK(std::abs(fine.states[k][0] - std::pow(fine.taus[k], 5)) < 1e-6);
}

TEST_CASE("single-step local error scales as h^6") {
    ModelSystem sys = scalar_system([](double tau, double y) { return y * std::cos(tau); });
    RVector y0(1);
    y0[0] = 1.0;
    const double exact_h = std::exp(std::sin(0.4));
    const double exact_h2 = std::exp(std::sin(0.2));

    StepResult full = rk45_step(sys, 0.0, y0, 0.4);
    StepResult half = rk45_step(sys, 0.0, y0, 0.2);
    const double err_full = std::abs(full.x5[0] - exact_h);
    const double err_half = std::abs(half.x5[0] - exact_h2);
    const double ratio = err_full / err_half;
    CHECK(ratio > 64.0 * 0.8);
    CHECK(ratio < 64.0 * 1.2);

    // the embedded estimate brackets the 4th-order solution's error
    CHECK(full.err > 0.0);
    CHECK(std::abs(full.x4[0] - full.x5[0]) > std::abs(full.x5[0] - exact_h));
}

TEST_CASE("zero forcing keeps the state constant") {
    ModelSystem sys = scalar_system([](double, double) { return 0.0; });
    RVector y0(1);
    y0[0] = 3.5;
    Trajectory traj = integrate(sys, y0, {0.0, 5.0}, tight());
    for (const RVector& s : traj.states) CHECK(s[0] == doctest::Approx(3.5));
}

TEST_CASE("integration is deterministic") {
    ModelSystem sys = scalar_system([](double tau, double y) { return std::sin(tau) - y; });
    RVector y0(1);
    y0[0] = 0.25;
    Trajectory a = integrate(sys, y0, {0.0, 3.0}, tight());
    Trajectory b = integrate(sys, y0, {0.0, 3.0}, tight());
    REQUIRE(a.taus.size() == b.taus.size());
    for (std::size_t k = 0; k < a.taus.size(); ++k) {
        CHECK(a.taus[k] == b.taus[k]);
        CHECK(a.states[k][0] == b.states[k][0]);  // bitwise
    }
    CHECK(a.stats.steps_accepted == b.stats.steps_accepted);
}

TEST_CASE("step budget is enforced") {
    ModelSystem sys = scalar_system([](double, double y) { return -10.0 * y; });
    RVector y0(1);
    y0[0] = 1.0;
    IntegratorConfig cfg = tight();
    cfg.max_steps = 3;
    CHECK_THROWS_AS(integrate(sys, y0, {0.0, 10.0}, cfg), MaxStepsExceeded);
}

TEST_CASE("singular mass falls back to least squares when consistent") {
    // mass = diag(1, 0) with forcing (f, 0): the pseudo-inverse path yields
    // x0' = f, x1' = 0 and records the fallback.
    ModelSystem sys;
    sys.dim = 2;
    sys.label = "singular-mass";
    sys.mass_at = [](double, const RVector&) {
        CMatrix m(2, 2);
        m.re(0, 0) = 1.0;
        return m;
    };
    sys.forcing_at = [](double tau, const RVector&) {
        RVector r(2);
        r[0] = std::cos(tau);
        return r;
    };
    IntegratorConfig cfg = tight();
    Trajectory traj = integrate(sys, RVector(2), {0.0, 1.0}, cfg);
    CHECK(traj.stats.pinv_fallbacks > 0);
    CHECK(traj.states.back()[0] == doctest::Approx(std::sin(1.0)).epsilon(1e-6));
    CHECK(traj.states.back()[1] == doctest::Approx(0.0));
}

TEST_CASE("inconsistent singular mass raises a numerical failure") {
    ModelSystem sys;
    sys.dim = 2;
    sys.label = "inconsistent";
    sys.mass_at = [](double, const RVector&) {
        CMatrix m(2, 2);
        m.re(0, 0) = 1.0;  // second row of the system is 0 = 1
        return m;
    };
    sys.forcing_at = [](double, const RVector&) {
        RVector r(2);
        r[0] = 1.0;
        r[1] = 1.0;
        return r;
    };
    CHECK_THROWS_AS(integrate(sys, RVector(2), {0.0, 1.0}, tight()),
                    NumericalFailure);
}

TEST_CASE("residual and condition channels are populated") {
    ModelSystem sys = scalar_system([](double, double y) { return -y; });
    RVector y0(1);
    y0[0] = 2.0;
    IntegratorConfig cfg = tight();
    cfg.estimate_condition = true;
    ResidualFn res = [](double, const RVector& x) { return std::abs(x[0]); };
    Trajectory traj = integrate(sys, y0, {0.0, 1.0}, cfg, res);
    REQUIRE(traj.residuals.size() == traj.taus.size());
    REQUIRE(traj.cond_estimates.size() == traj.taus.size());
    CHECK(traj.residuals.front() == doctest::Approx(2.0));
    CHECK(traj.residuals.back() == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-6));
    for (double c : traj.cond_estimates) CHECK(c == doctest::Approx(1.0));
}
