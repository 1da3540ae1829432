#pragma once

// Parameter types for a three-level atom coupled at N points to waveguide A
// (probe, |1>-|3|) and at M points to waveguide B (scattered channel, |1>-|2>),
// with a classical control drive on |2>-|3>. Internal unit system: the per-point
// waveguide decay rate of |3> sets the rate unit (gamma_31 = 1 by default) and
// both group velocities default to 1.

#include <cmath>
#include <complex>
#include <optional>

namespace geit {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Which waveguide a quantity refers to: A carries the probe, B the scattered photon.
enum class Channel { A, B };

// Bare atom: level splittings and non-waveguide damping/dephasing channels.
struct AtomSpec {
    double omega_21 = 2000.0 * kPi;  // |1>-|2> splitting (rad/time), 0 < omega_21 < omega_31
    double omega_31 = 4000.0 * kPi;  // |1>-|3> splitting (rad/time)
    double gamma_2 = 0.0;            // non-waveguide damping of |2> (scattering model)
    double gamma_3 = 0.0;            // non-waveguide damping of |3> (scattering model)
    double gamma_2_phi = 0.0;        // pure dephasing of |2> (delayed master equation only)
    double gamma_3_phi = 0.0;        // pure dephasing of |3> (delayed master equation only)
    double gamma_31 = 0.0;           // non-guided |3>->|1> decay (delayed master equation only)
    double gamma_32 = 0.0;           // non-guided |3>->|2> decay (delayed master equation only)
};

// Multi-point coupling of |1>-|3> to waveguide A. Points sit at x_n = (n-1) d with
// travel time tau = d / v_g between neighbours. The static phase per interval is
// phi = omega_31 * tau unless overridden.
struct CouplingA {
    int n_points = 1;          // N >= 1
    double tau = 0.0;          // inter-point travel time (>= 0)
    double gamma_31 = 1.0;     // per-point waveguide-induced decay rate (the rate unit)
    std::optional<double> phi; // static phase override (radians)
};

// Multi-point coupling of |1>-|2> to waveguide B; M = 0 removes the channel.
// omega_beta is the frequency at which the scattered photon's interval phase
// omega_beta * tau_tilde is evaluated; it defaults to omega_21 and is held fixed
// across a probe sweep.
struct CouplingB {
    int m_points = 0;                 // M >= 0
    double tau_tilde = 0.0;           // inter-point travel time (>= 0)
    double gamma_21 = 0.0;            // per-point waveguide-induced decay rate
    std::optional<double> omega_beta; // scattered-photon frequency override (rad/time)
};

// Classical control drive on |2>-|3>.
struct DriveSpec {
    Complex omega_c = 0.0;  // control Rabi amplitude (rad/time)
    double delta_32 = 0.0;  // control detuning from omega_32 (rad/time)
};

// Weak classical probe on |1>-|3> (used by the delayed-master-equation runs).
struct ProbeSpec {
    double omega_p = 0.01;  // probe Rabi amplitude (rad/time)
    double delta_31 = 0.0;  // probe detuning for single-point runs (rad/time)
};

struct SystemParams {
    AtomSpec atom;
    CouplingA coupling_a;
    CouplingB coupling_b;
    DriveSpec drive;
    ProbeSpec probe;
    double v_g = 1.0;        // waveguide A group velocity
    double v_g_tilde = 1.0;  // waveguide B group velocity
    double epsilon = 1e-12;  // degenerate-denominator threshold, units of gamma_31^2

    // Effective static phase per A interval: coupling_a.phi or omega_31 * tau.
    double phase_a() const {
        return coupling_a.phi ? *coupling_a.phi : atom.omega_31 * coupling_a.tau;
    }
    // Effective B-channel phase frequency: coupling_b.omega_beta or omega_21.
    double omega_beta() const {
        return coupling_b.omega_beta ? *coupling_b.omega_beta : atom.omega_21;
    }
    // Per-point coupling constants g = sqrt(Gamma v / 2) of the delta-potential model.
    double g31() const { return std::sqrt(coupling_a.gamma_31 * v_g / 2.0); }
    double g21() const { return std::sqrt(coupling_b.gamma_21 * v_g_tilde / 2.0); }

    // Throws ValidationError naming the violated invariant.
    void validate() const;
};

}  // namespace geit
