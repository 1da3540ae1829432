#pragma once

// Closed-form single-photon transport for the multi-point-coupled three-level atom:
// collective Lamb shift and decay of the |3> channel, the analogous shift/decay of
// the |2> channel, the probe transmission amplitude, the atomic excitation amplitude
// of the scattering eigenstate, and the steady-state probe coherence of the
// delayed master equation.

#include <complex>

#include "geit/types.hpp"

namespace geit {

// sum_{k=1}^{count-1} (count - k) sin(k x)
template <class Scalar>
Scalar weighted_sine_sum(int count, Scalar x) {
    Scalar s{};
    for (int k = 1; k < count; ++k) s += Scalar(count - k) * std::sin(Scalar(k) * x);
    return s;
}

// |sum_{k=0}^{count-1} exp(i k x)|^2 / 2, the Fejer-type kernel behind the collective
// decay; manifestly >= 0 and equal to count/2 + sum_{k=1}^{count-1}(count-k) cos(k x).
template <class Scalar>
Scalar half_power_sum(int count, Scalar x) {
    std::complex<Scalar> s{};
    for (int k = 0; k < count; ++k)
        s += std::complex<Scalar>(std::cos(Scalar(k) * x), std::sin(Scalar(k) * x));
    return std::norm(s) / Scalar(2);
}

// sum_{k=0}^{count-1} exp(i k x); the probe picks this phase factor up across the
// coupling points.
template <class Scalar>
std::complex<Scalar> phase_sum(int count, Scalar x) {
    std::complex<Scalar> s{};
    for (int k = 0; k < count; ++k)
        s += std::complex<Scalar>(std::cos(Scalar(k) * x), std::sin(Scalar(k) * x));
    return s;
}

// Collective Lamb shift of |3> from the N-point coupling, as a function of probe detuning.
double lamb_shift_a(const SystemParams& p, double delta_31);

// Collective decay rate of |3> into waveguide A (>= 0; vanishes at decoherence-free points).
double decay_a(const SystemParams& p, double delta_31);

// Collective frequency shift of |2> from the M-point coupling (detuning-independent:
// evaluated at the fixed phase omega_beta * tau_tilde).
double shift_b(const SystemParams& p);

// Collective decay rate of |2> into waveguide B (>= 0; zero when M = 0).
double decay_b(const SystemParams& p);

// Two-photon detuning Delta_F = delta_31 - delta_32 - shift_b.
double delta_f(const SystemParams& p, double delta_31);

// Shifted single-photon detuning Delta_S = delta_31 - lamb_shift_a.
double delta_s(const SystemParams& p, double delta_31);

// Total |2> coherence width gamma = gamma_2 / 2 + decay_b (real).
double width_21(const SystemParams& p);

// Probe transmission amplitude t_N. Throws DegenerateDenominator when the denominator
// magnitude is below epsilon (all dampings zero at an exact resonance). For
// omega_c == 0 the common factor (Delta_F + i gamma) is cancelled algebraically, so
// the two-level limit is evaluated exactly even at Delta_F = 0.
Complex transmission(const SystemParams& p, double delta_31);

// Excitation amplitude e3 of the scattering eigenstate (same denominator and
// degeneracy handling as transmission).
Complex excitation_e3(const SystemParams& p, double delta_31);

// Steady-state probe coherence (the amplitude of the e^{-i delta_31 t} oscillation
// of rho_31) predicted for the weak-probe delayed master equation.
Complex steady_rho31_analytic(const SystemParams& p, double delta_31);

}  // namespace geit
