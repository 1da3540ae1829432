// Acceptance gate for the giant-atom transport simulator. Each criterion prints
// exactly one "A# PASS — ..." or "A# FAIL — ...: reason" line; the process exit
// code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geit/analysis.hpp"
#include "geit/cli.hpp"
#include "geit/dde.hpp"
#include "geit/model.hpp"
#include "geit/scattering.hpp"
#include "geit/types.hpp"

using namespace geit;

namespace {

int g_failures = 0;

// State handed between criteria: A9 audits the trajectories produced by A7/A8,
// and A11 folds in the flux record from A1's randomized sweep.
struct Shared {
    std::optional<OracleCheckReport> a1_report;
    bool have_trajectories = false;
    double max_trace_dev = 0.0;
    double max_herm_dev = 0.0;

    void absorb(const Trajectory& traj) {
        have_trajectories = true;
        max_trace_dev = std::max(max_trace_dev, traj.max_trace_dev);
        max_herm_dev = std::max(max_herm_dev, traj.max_herm_dev);
    }
} g_shared;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs one criterion body; an empty returned string means pass, anything else
// is the failure reason. Exceptions fail the criterion instead of the binary.
void criterion(const char* id, const char* description,
               const std::function<std::string()>& body) {
    std::string reason;
    try {
        reason = body();
    } catch (const std::exception& e) {
        reason = std::string("unexpected exception: ") + e.what();
    }
    if (reason.empty()) {
        std::cout << id << " PASS — " << description << std::endl;
    } else {
        std::cout << id << " FAIL — " << description << ": " << reason << std::endl;
        ++g_failures;
    }
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

SystemParams two_point_probe(double tau, double phi) {
    SystemParams p;
    p.coupling_a.n_points = 2;
    p.coupling_a.tau = tau;
    p.coupling_a.gamma_31 = 1.0;
    p.coupling_a.phi = phi;
    p.drive.omega_c = 0.1;
    return p;
}

std::string a1_randomized_cross_check() {
    const auto start = std::chrono::steady_clock::now();
    const OracleCheckReport rep = oracle_check(42, 200, 1e-9);
    const double elapsed = seconds_since(start);
    g_shared.a1_report = rep;
    std::ostringstream why;
    if (!rep.pass)
        why << rep.failures << " of " << rep.draws << " draws exceeded 1e-9 (max t dev "
            << rep.max_dev_t << ", max e3 dev " << rep.max_dev_e3 << ")";
    else if (elapsed >= 10.0)
        why << "runtime " << elapsed << " s exceeds the 10 s budget";
    return why.str();
}

std::string a2_single_point_lorentzian() {
    SystemParams p;  // one coupling point, no control drive, lossless
    double worst = 0.0;
    for (double d : linspace(-2.0, 2.0, 401)) {
        const double t2 = std::norm(transmission(p, d));
        const double expected = d * d / (d * d + 0.25);
        worst = std::max(worst, std::abs(t2 - expected));
    }
    if (worst >= 1e-12) {
        std::ostringstream why;
        why << "max |T - Lorentzian| = " << worst;
        return why.str();
    }
    return {};
}

std::string a3_collective_decay_closed_forms() {
    SystemParams p;
    p.coupling_a.tau = 1.0;
    p.coupling_a.phi = 0.0;  // accumulated phase equals the detuning
    double worst2 = 0.0;
    double worst3 = 0.0;
    for (double x : linspace(0.0, 2.0 * kPi, 721)) {
        p.coupling_a.n_points = 2;
        const double c = std::cos(0.5 * x);
        worst2 = std::max(worst2, std::abs(decay_a(p, x) - 2.0 * c * c));
        p.coupling_a.n_points = 3;
        const double s = 0.5 + std::cos(x);
        worst3 = std::max(worst3, std::abs(decay_a(p, x) - 2.0 * s * s));
    }
    if (worst2 >= 5e-14 || worst3 >= 5e-14) {
        std::ostringstream why;
        why << "max deviation " << std::max(worst2, worst3);
        return why.str();
    }
    return {};
}

std::string a4_single_absorption_feature() {
    const SystemParams p = two_point_probe(0.05, 200.0 * kPi);
    const Spectrum s = sweep_spectrum(p, DetuningGrid{-2.0, 2.0, 401});
    const int features = absorption_feature_count(p, s);
    if (features != 1) {
        std::ostringstream why;
        why << "expected 1 absorption feature, found " << features;
        return why.str();
    }
    const double t0 = std::norm(transmission(p, 0.0));
    if (!(t0 > 1.0 - 1e-6)) {
        std::ostringstream why;
        why << "two-photon-resonance transmittance " << t0;
        return why.str();
    }
    return {};
}

std::string a5_out_of_phase_transparency() {
    const SystemParams p = two_point_probe(0.01, 201.0 * kPi);
    double tmin = 1.0;
    for (double d : linspace(-2.0, 2.0, 401))
        tmin = std::min(tmin, std::norm(transmission(p, d)));
    if (!(tmin > 0.999)) {
        std::ostringstream why;
        why << "minimum transmittance " << tmin;
        return why.str();
    }
    return {};
}

std::string a6_decoherence_free_points() {
    SystemParams p = two_point_probe(10.0, 200.0 * kPi);
    std::ostringstream why;

    const DfReport rep = decoherence_free_points(p, -2.0, 2.0);
    if (rep.whole_range) return "decay reported as vanishing everywhere";
    if (rep.points.size() != 6) {
        why << "expected 6 decay-free detunings, found " << rep.points.size();
        return why.str();
    }
    for (int j = 0; j < 6; ++j) {
        const double expected = (2.0 * j - 5.0) * kPi / 10.0;  // odd multiples of pi/10
        if (std::abs(rep.points[static_cast<std::size_t>(j)] - expected) > 1e-9) {
            why << "decay-free point " << rep.points[static_cast<std::size_t>(j)]
                << " differs from " << expected;
            return why.str();
        }
    }

    // Full transmission at every decay-free detuning, with and without control.
    for (double oc : {0.0, 0.1}) {
        p.drive.omega_c = oc;
        for (double d : rep.points) {
            const double mag = std::abs(transmission(p, d));
            if (!(mag > 1.0 - 1e-6)) {
                why << "|t| = " << mag << " at decay-free detuning " << d
                    << " with control " << oc;
                return why.str();
            }
        }
    }

    // The single-photon resonances interleave the decay-free detunings: seven
    // distinct roots, none coinciding with a decay-free point, and the probe is
    // strongly absorbed somewhere between each adjacent decay-free pair.
    p.drive.omega_c = 0.0;
    const std::vector<double> roots = single_photon_resonances(p, -2.0, 2.0);
    const std::vector<double> frozen = {-0.842320393236049, -0.706817435809582,
                                        -0.285234189445009, 0.0,
                                        0.285234189445009,  0.706817435809582,
                                        0.842320393236049};
    if (roots.size() != frozen.size()) {
        why << "expected " << frozen.size() << " resonances, found " << roots.size();
        return why.str();
    }
    for (std::size_t i = 0; i < frozen.size(); ++i) {
        if (std::abs(roots[i] - frozen[i]) > 1e-6) {
            why << "resonance " << roots[i] << " differs from " << frozen[i];
            return why.str();
        }
    }
    for (double r : roots)
        for (double d : rep.points)
            if (std::abs(r - d) < 1e-3) {
                why << "resonance " << r << " coincides with decay-free point " << d;
                return why.str();
            }
    for (std::size_t j = 0; j + 1 < rep.points.size(); ++j) {
        double tmin = 1.0;
        const double lo = rep.points[j];
        const double hi = rep.points[j + 1];
        for (int i = 1; i < 200; ++i)
            tmin = std::min(tmin, std::norm(transmission(p, lo + (hi - lo) * i / 200.0)));
        if (!(tmin < 0.5)) {
            why << "no absorption dip between " << lo << " and " << hi << " (min T " << tmin
                << ")";
            return why.str();
        }
    }
    return {};
}

SystemParams lower_transition_pair() {
    SystemParams p;
    p.atom.omega_21 = 2.0 * kPi;
    p.atom.omega_31 = 4.0 * kPi;
    p.coupling_a.n_points = 1;
    p.coupling_a.gamma_31 = 0.0;
    p.coupling_b.m_points = 2;
    p.coupling_b.tau_tilde = 0.5;  // half the |1>-|2> oscillation period
    p.coupling_b.gamma_21 = 1.0;
    p.probe.omega_p = 0.0;
    return p;
}

std::string a7_decay_elimination() {
    const SystemParams p = lower_transition_pair();
    std::ostringstream why;

    const double residual = decay_b(p);
    if (!(std::abs(residual) < 1e-12)) {
        why << "collective |2> decay " << residual << " not eliminated";
        return why.str();
    }

    DdeConfig c;
    c.dt = 0.005;
    c.t_final = 5.0;
    c.initial_level = 2;
    c.output_stride = 1;
    const Trajectory traj = integrate(p, c);
    g_shared.absorb(traj);

    const auto at = [&](double t) {
        const auto k = static_cast<std::size_t>(std::llround(t / c.dt));
        return traj.states[k](1, 1).real();
    };
    const double r_lo = at(5.0 * 0.5);   // five interval times in
    const double r_hi = at(10.0 * 0.5);  // ten interval times in
    if (!(r_lo > 0.0) || !(r_hi > 0.0)) {
        why << "population not positive (" << r_lo << ", " << r_hi << ")";
        return why.str();
    }
    const double slope = std::abs(std::log(r_hi) - std::log(r_lo)) / 2.5;
    if (!(slope < 1e-3)) {
        why << "population log-slope " << slope << " exceeds 1e-3";
        return why.str();
    }
    return {};
}

std::string a8_demodulation_matches_steady_state() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Complex> ratios;
    std::ostringstream why;

    for (double tau : {0.05, 3.0}) {
        SystemParams p = two_point_probe(tau, 4000.0 * kPi * tau);
        p.probe.omega_p = 0.01;

        const std::vector<double> grid = linspace(-0.5, 0.5, 21);
        std::vector<Complex> analytic;
        analytic.reserve(grid.size());
        double amax = 0.0;
        for (double d : grid) {
            analytic.push_back(steady_rho31_analytic(p, d));
            amax = std::max(amax, std::abs(analytic.back()));
        }

        DdeConfig c;
        c.dt = tau < 1.0 ? 0.0025 : 0.02;
        c.t_final = 3000.0;
        c.demod_window = 520.0;  // > 4 beat periods at the slowest kept detuning
        c.demod_tol = 0.02;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            // The exactly dark two-photon-resonance point has no steady tone to
            // compare against; skip anything at that noise floor.
            if (std::abs(analytic[k]) < 1e-3 * amax) continue;
            p.probe.delta_31 = grid[k];
            const DdeResult r = run_dde(p, c);
            g_shared.absorb(r.trajectory);
            ratios.push_back(r.rho31_tilde / analytic[k]);
        }
    }

    if (ratios.size() < 30) {
        why << "only " << ratios.size() << " usable grid points";
        return why.str();
    }
    Complex mean = 0.0;
    for (Complex r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double spread = 0.0;
    for (Complex r : ratios) spread = std::max(spread, std::abs(r - mean) / std::abs(mean));
    const double elapsed = seconds_since(start);
    if (!(spread < 0.02)) {
        why << "relative spread of demodulated/steady ratio " << spread;
        return why.str();
    }
    if (elapsed >= 300.0) {
        why << "runtime " << elapsed << " s exceeds the 5 min budget";
        return why.str();
    }
    return {};
}

std::string a9_integrator_integrity() {
    std::ostringstream why;
    if (!g_shared.have_trajectories)
        return "no trajectories were recorded by the preceding criteria";
    if (!(g_shared.max_trace_dev < 1e-9 && g_shared.max_herm_dev < 1e-9)) {
        why << "worst trace deviation " << g_shared.max_trace_dev << ", hermiticity deviation "
            << g_shared.max_herm_dev;
        return why.str();
    }

    // Step-halving order study on a smooth stretch (before the first feedback
    // breakpoint, where the solution has no derivative jumps).
    SystemParams p = two_point_probe(1.0, 200.0 * kPi);
    p.probe.omega_p = 0.01;
    p.probe.delta_31 = 0.2;
    const auto final_at = [&p](double dt) {
        DdeConfig c;
        c.dt = dt;
        c.t_final = 0.8;
        return integrate(p, c).final_state();
    };
    const DensityMatrix ref = final_at(0.00125);
    const double e1 = (final_at(0.02) - ref).cwiseAbs().maxCoeff();
    const double e2 = (final_at(0.01) - ref).cwiseAbs().maxCoeff();
    if (!(e1 > 0.0) || !(e2 > 0.0)) return "degenerate step-halving errors";
    const double order = std::log2(e1 / e2);
    if (!(order > 3.6 && order < 4.4)) {
        why << "observed convergence order " << order;
        return why.str();
    }
    return {};
}

std::string a10_window_width_prediction() {
    const SystemParams p = two_point_probe(0.05, 200.0 * kPi);
    const Spectrum s = sweep_spectrum(p, DetuningGrid{-0.3, 0.3, 6001});
    const WindowReport w = transparency_window(p, s);
    std::ostringstream why;
    if (std::abs(w.predicted - 0.005) > 1e-12) {
        why << "predicted width " << w.predicted << " differs from |omega_c|^2 / decay(0)";
        return why.str();
    }
    const double rel = std::abs(w.width - w.predicted) / w.predicted;
    if (!(rel < 0.2)) {
        why << "measured width " << w.width << " deviates " << 100.0 * rel
            << "% from prediction " << w.predicted;
        return why.str();
    }
    return {};
}

std::string a11_flux_conservation() {
    std::mt19937_64 rng(20250825);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const SystemParams p = random_cross_check_params(rng, false);
        const ScatteringSolution sol = solve_amplitudes(p, p.probe.delta_31);
        worst = std::max(worst, flux_deviation(sol, p));
    }
    if (g_shared.a1_report) worst = std::max(worst, g_shared.a1_report->max_flux_dev);
    if (!(worst < 1e-10)) {
        std::ostringstream why;
        why << "worst flux deviation " << worst;
        return why.str();
    }
    return {};
}

}  // namespace

int main() {
    criterion("A1", "closed forms match the direct boundary solver on 200 randomized setups",
              a1_randomized_cross_check);
    criterion("A2", "single-point coupling transmits a Lorentzian absorption profile",
              a2_single_point_lorentzian);
    criterion("A3", "two- and three-point collective decay closed forms hold over a full period",
              a3_collective_decay_closed_forms);
    criterion("A4", "in-phase two-point probe shows one absorption feature, transparent on "
                    "two-photon resonance",
              a4_single_absorption_feature);
    criterion("A5", "out-of-phase two-point coupling at short delay is transparent everywhere",
              a5_out_of_phase_transparency);
    criterion("A6", "long-delay coupling yields six decay-free detunings interleaved with "
                    "absorption",
              a6_decoherence_free_points);
    criterion("A7", "half-period lower-transition pair eliminates collective decay and freezes "
                    "the population",
              a7_decay_elimination);
    criterion("A8", "demodulated delayed dynamics are proportional to the steady-state "
                    "coherence across the probe grid",
              a8_demodulation_matches_steady_state);
    criterion("A9", "trace and hermiticity preserved; fourth-order step convergence",
              a9_integrator_integrity);
    criterion("A10", "transparency half-width matches the control-power prediction within 20%",
              a10_window_width_prediction);
    criterion("A11", "photon flux is conserved in every lossless direct solve",
              a11_flux_conservation);
    return g_failures;
}
