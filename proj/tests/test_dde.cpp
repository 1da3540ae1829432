#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "geit/dde.hpp"
#include "geit/errors.hpp"
#include "geit/model.hpp"
#include "geit/types.hpp"

using namespace geit;

namespace {

// Lossless two-point probe/control configuration used throughout.
SystemParams probe_config(double tau, double delta) {
    SystemParams p;
    p.coupling_a.n_points = 2;
    p.coupling_a.tau = tau;
    p.coupling_a.gamma_31 = 1.0;
    p.coupling_a.phi = 200.0 * kPi;
    p.drive.omega_c = 0.1;
    p.probe.omega_p = 0.01;
    p.probe.delta_31 = delta;
    return p;
}

// M = 2 with omega_21 * tau_tilde = pi: collective |2> decay cancels once the
// feedback returns.
SystemParams feedback_config() {
    SystemParams p;
    p.atom.omega_21 = 2.0 * kPi;
    p.atom.omega_31 = 4.0 * kPi;
    p.coupling_a.n_points = 1;
    p.coupling_a.gamma_31 = 0.0;
    p.coupling_b.m_points = 2;
    p.coupling_b.tau_tilde = 0.5;
    p.coupling_b.gamma_21 = 1.0;
    p.probe.omega_p = 0.0;
    return p;
}

}  // namespace

TEST_CASE("basis states and deviation metrics") {
    for (int level : {1, 2, 3}) {
        const DensityMatrix rho = basis_state(level);
        CHECK(trace_deviation(rho) == 0.0);
        CHECK(hermiticity_deviation(rho) == 0.0);
        CHECK(rho(level - 1, level - 1) == Complex(1.0));
    }
    CHECK_THROWS_AS((void)basis_state(0), ValidationError);
    CHECK_THROWS_AS((void)basis_state(4), ValidationError);

    DensityMatrix rho = basis_state(1);
    rho(0, 0) = 0.75;
    CHECK(trace_deviation(rho) == doctest::Approx(0.25).epsilon(1e-15));
    rho = basis_state(1);
    rho(0, 1) = Complex(0.0, 0.3);
    rho(1, 0) = Complex(0.0, 0.3);  // anti-Hermitian pair: rho10 should be -0.3i
    CHECK(hermiticity_deviation(rho) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("pure exponential decay of a single-point emitter") {
    SystemParams p;
    p.coupling_a.n_points = 1;
    p.coupling_a.gamma_31 = 0.8;
    p.probe.omega_p = 0.0;

    DdeConfig c;
    c.dt = 0.002;
    c.t_final = 5.0;
    c.initial_level = 3;
    const Trajectory traj = integrate(p, c);
    CHECK(traj.final_time() == doctest::Approx(5.0).epsilon(1e-12));
    const double rho33 = traj.final_state()(2, 2).real();
    CHECK(std::abs(rho33 - std::exp(-0.8 * 5.0)) < 1e-9);
    const double rho11 = traj.final_state()(0, 0).real();
    CHECK(std::abs(rho11 - (1.0 - std::exp(-0.8 * 5.0))) < 1e-9);
    CHECK(traj.max_trace_dev < 1e-12);
    CHECK(traj.max_herm_dev < 1e-12);
}

TEST_CASE("undamped control drive produces exact Rabi oscillation between |2> and |3>") {
    SystemParams p;
    p.coupling_a.n_points = 1;
    p.coupling_a.gamma_31 = 0.0;
    p.drive.omega_c = 0.5;
    p.probe.omega_p = 0.0;

    DdeConfig c;
    c.dt = 0.005;
    c.t_final = 8.0;
    c.initial_level = 2;
    const Trajectory traj = integrate(p, c);
    // H couples |2>,|3> with amplitude omega_c: populations oscillate as cos^2(omega_c t).
    const double expected = std::pow(std::cos(0.5 * 8.0), 2);
    CHECK(std::abs(traj.final_state()(1, 1).real() - expected) < 1e-8);
    CHECK(std::abs(traj.final_state()(2, 2).real() - (1.0 - expected)) < 1e-8);
}

TEST_CASE("delay terms: gated feedback reproduces the free segment exactly") {
    const SystemParams p = feedback_config();
    DdeConfig c;
    c.dt = 0.0025;
    // One step short of the first return at t = 0.5, so no integration stage
    // touches the breakpoint.
    c.t_final = 0.5 - c.dt;
    c.initial_level = 2;
    const Trajectory traj = integrate(p, c);
    // Local-only dynamics: rho22(t) = exp(-M Gamma_21 t) = exp(-2 t).
    CHECK(std::abs(traj.final_state()(1, 1).real() - std::exp(-2.0 * c.t_final)) < 1e-10);
}

TEST_CASE("delayed revival settles onto the predicted plateau") {
    const SystemParams p = feedback_config();
    DdeConfig c;
    c.dt = 0.005;
    c.t_final = 12.0;
    c.initial_level = 2;
    c.output_stride = 1;
    const Trajectory traj = integrate(p, c);
    // Long-time limit of d rho22/dt = -2 rho22(t) + 2 rho22(t - 0.5) started from 1:
    // rho22(inf) = 1 / (1 + 2 tau~) = 0.5 (final-value theorem).
    CHECK(traj.final_state()(1, 1).real() == doctest::Approx(0.5).epsilon(5e-3));

    // Slope over the plateau is tiny compared with the bare rate.
    double t5 = 2.5, t10 = 5.0, v5 = 0.0, v10 = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (std::abs(traj.times[k] - t5) < c.dt / 2) v5 = traj.states[k](1, 1).real();
        if (std::abs(traj.times[k] - t10) < c.dt / 2) v10 = traj.states[k](1, 1).real();
    }
    REQUIRE(v5 > 0.0);
    REQUIRE(v10 > 0.0);
    CHECK(std::abs(std::log(v10) - std::log(v5)) / (t10 - t5) < 1e-3);
}

TEST_CASE("feeding a steady pre-history freezes the dark configuration") {
    const SystemParams p = feedback_config();
    DdeConfig c;
    c.dt = 0.005;
    c.t_final = 3.0;
    c.initial_level = 2;
    c.feed_history = true;
    c.history = [](double) { return basis_state(2); };
    const Trajectory traj = integrate(p, c);
    // With rho(t<=0) = |2><2| the delayed gain exactly balances the local decay
    // from t = 0 on: the population never moves.
    CHECK(std::abs(traj.final_state()(1, 1).real() - 1.0) < 1e-10);
}

TEST_CASE("feed_history without a history function is an error") {
    const SystemParams p = feedback_config();
    DdeConfig c;
    c.dt = 0.005;
    c.t_final = 1.0;
    c.feed_history = true;
    CHECK_THROWS_AS((void)integrate(p, c), MissingHistory);
}

TEST_CASE("step size is bounded by the shortest delay") {
    const SystemParams p = probe_config(0.05, 0.0);
    DdeConfig c;
    c.dt = 0.01;  // > tau / 20 = 0.0025
    c.t_final = 1.0;
    CHECK_THROWS_AS((void)integrate(p, c), StepSizeTooLarge);
    c.dt = 0.0025;
    CHECK_NOTHROW((void)integrate(p, c));
}

TEST_CASE("config validation") {
    const SystemParams p = probe_config(0.05, 0.0);
    DdeConfig c;
    c.dt = -1.0;
    CHECK_THROWS_AS((void)integrate(p, c), ValidationError);
    c = DdeConfig{};
    c.t_final = 0.0;
    CHECK_THROWS_AS((void)integrate(p, c), ValidationError);
    c = DdeConfig{};
    c.dt = 0.002;  // inside the step bound, so the level check is what fires
    c.initial_level = 5;
    CHECK_THROWS_AS((void)integrate(p, c), ValidationError);
}

TEST_CASE("demodulation recovers a pure tone exactly") {
    const double delta = 0.7;
    const Complex amp(0.3, -0.4);
    Trajectory traj;
    traj.dt = 0.001;
    traj.t0 = 0.0;
    const int steps = 100000;
    for (int k = 0; k <= steps; ++k) {
        const double t = k * traj.dt;
        traj.rho31.push_back(amp * Complex(std::cos(delta * t), -std::sin(delta * t)));
    }
    traj.times = {0.0, steps * traj.dt};
    const double window = 4.0 * 2.0 * kPi / delta;
    const Complex out = demodulate(traj, delta, window);
    CHECK(std::abs(out - amp) < 1e-10);

    // Adding a decaying transient perturbs the estimate only a little, and the
    // drift check between consecutive windows stays quiet.
    Trajectory noisy = traj;
    for (int k = 0; k <= steps; ++k) {
        const double t = k * noisy.dt;
        noisy.rho31[k] += 0.2 * std::exp(-0.3 * t);
    }
    const Complex out2 = demodulate(noisy, delta, window, 0.05);
    CHECK(std::abs(out2 - amp) < 1e-3);
}

TEST_CASE("demodulation flags an unconverged trajectory") {
    Trajectory traj;
    traj.dt = 0.01;
    traj.t0 = 0.0;
    for (int k = 0; k <= 20000; ++k) traj.rho31.push_back(Complex(1e-4 * k * traj.dt, 0.0));
    traj.times = {0.0, 200.0};
    CHECK_THROWS_AS((void)demodulate(traj, 0.0, 50.0, 0.01), NotConverged);
    // Without a drift tolerance the same data demodulates fine.
    CHECK_NOTHROW((void)demodulate(traj, 0.0, 50.0));
}

TEST_CASE("demodulation window validation") {
    Trajectory traj;
    traj.dt = 0.01;
    traj.t0 = 0.0;
    for (int k = 0; k <= 1000; ++k) traj.rho31.push_back(Complex(0.0, 0.0));
    traj.times = {0.0, 10.0};
    CHECK_THROWS_AS((void)demodulate(traj, 2.0, 1.0), ValidationError);   // < 4 periods
    CHECK_THROWS_AS((void)demodulate(traj, 2.0, 50.0), ValidationError);  // longer than run
    CHECK_THROWS_AS((void)demodulate(traj, 2.0, -1.0), ValidationError);
}

TEST_CASE("weak-probe steady state matches the closed-form coherence") {
    for (double tau : {0.05, 1.0}) {
        for (double delta : {-0.3, 0.2}) {
            const SystemParams p = probe_config(tau, delta);
            DdeConfig c;
            c.dt = tau / 20.0;
            if (c.dt > 0.01) c.dt = 0.01;
            c.t_final = 400.0;
            c.demod_window = 4.0 * 2.0 * kPi / std::abs(delta) + 5.0;
            c.demod_tol = 0.05;
            const DdeResult r = run_dde(p, c);
            const Complex analytic = steady_rho31_analytic(p, delta);
            const Complex ratio = r.rho31_tilde / analytic;
            CHECK(std::abs(ratio - Complex(2.0 * kPi, 0.0)) < 0.02 * 2.0 * kPi);
            CHECK(r.trajectory.max_trace_dev < 1e-9);
            CHECK(r.trajectory.max_herm_dev < 1e-9);
        }
    }
}

TEST_CASE("integrator converges at fourth order on a smooth segment") {
    // Entirely inside the first delay interval: the dynamics are a smooth ODE.
    SystemParams p = probe_config(1.0, 0.3);
    DdeConfig base;
    base.t_final = 0.8;
    base.initial_level = 1;

    auto solve = [&](double dt) {
        DdeConfig c = base;
        c.dt = dt;
        return integrate(p, c).final_state();
    };
    const DensityMatrix ref = solve(0.00125);
    const double e1 = (solve(0.02) - ref).cwiseAbs().maxCoeff();
    const double e2 = (solve(0.01) - ref).cwiseAbs().maxCoeff();
    REQUIRE(e1 > 0.0);
    REQUIRE(e2 > 0.0);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.6);
    CHECK(order < 4.4);
}

TEST_CASE("initial_state override takes precedence over initial_level") {
    SystemParams p;
    p.coupling_a.n_points = 1;
    p.coupling_a.gamma_31 = 1.0;
    p.probe.omega_p = 0.0;
    DdeConfig c;
    c.dt = 0.01;
    c.t_final = 1.0;
    c.initial_level = 1;
    DensityMatrix mixed = DensityMatrix::Zero();
    mixed(0, 0) = 0.5;
    mixed(2, 2) = 0.5;
    c.initial_state = mixed;
    const Trajectory traj = integrate(p, c);
    // Half the |3> weight decays at Gamma = 1.
    CHECK(std::abs(traj.final_state()(2, 2).real() - 0.5 * std::exp(-1.0)) < 1e-9);
}
