#include "geit/model.hpp"

#include <cmath>

#include "geit/errors.hpp"

namespace geit {

namespace {

// Unit scale for the degeneracy threshold; falls back to 1 when the coupling is off.
double rate_unit(const SystemParams& p) {
    return p.coupling_a.gamma_31 > 0.0 ? p.coupling_a.gamma_31 : 1.0;
}

}  // namespace

double lamb_shift_a(const SystemParams& p, double delta_31) {
    const double x = delta_31 * p.coupling_a.tau + p.phase_a();
    return p.coupling_a.gamma_31 * weighted_sine_sum(p.coupling_a.n_points, x);
}

double decay_a(const SystemParams& p, double delta_31) {
    const double x = delta_31 * p.coupling_a.tau + p.phase_a();
    return p.coupling_a.gamma_31 * half_power_sum(p.coupling_a.n_points, x);
}

double shift_b(const SystemParams& p) {
    const double x = p.omega_beta() * p.coupling_b.tau_tilde;
    return p.coupling_b.gamma_21 * weighted_sine_sum(p.coupling_b.m_points, x);
}

double decay_b(const SystemParams& p) {
    const double x = p.omega_beta() * p.coupling_b.tau_tilde;
    return p.coupling_b.gamma_21 * half_power_sum(p.coupling_b.m_points, x);
}

double delta_f(const SystemParams& p, double delta_31) {
    return delta_31 - p.drive.delta_32 - shift_b(p);
}

double delta_s(const SystemParams& p, double delta_31) {
    return delta_31 - lamb_shift_a(p, delta_31);
}

double width_21(const SystemParams& p) { return p.atom.gamma_2 / 2.0 + decay_b(p); }

namespace {

// Shared denominator bookkeeping for transmission / excitation / steady coherence.
// For omega_c == 0 the factor (Delta_F + i gamma) cancels between numerator and
// denominator; evaluating the reduced form keeps the removable singularity finite.
struct Denominator {
    bool reduced;    // true: the (Delta_F + i gamma) factor has been cancelled
    Complex f;       // Delta_F + i gamma
    Complex s;       // Delta_S + i gamma_3 / 2
    Complex value;   // the (possibly reduced) denominator
};

Denominator make_denominator(const SystemParams& p, double delta_31) {
    const Complex i(0.0, 1.0);
    Denominator d;
    d.f = Complex(delta_f(p, delta_31), width_21(p));
    d.s = Complex(delta_s(p, delta_31), p.atom.gamma_3 / 2.0);
    const double oc2 = std::norm(p.drive.omega_c);
    const Complex s_full = d.s + i * decay_a(p, delta_31);
    d.reduced = (oc2 == 0.0);
    d.value = d.reduced ? s_full : d.f * s_full - oc2;
    const double unit = rate_unit(p);
    const double floor = d.reduced ? p.epsilon * unit : p.epsilon * unit * unit;
    if (std::abs(d.value) < floor)
        throw DegenerateDenominator("scattering denominator magnitude below epsilon");
    return d;
}

}  // namespace

Complex transmission(const SystemParams& p, double delta_31) {
    const Denominator d = make_denominator(p, delta_31);
    if (d.reduced) return d.s / d.value;
    return (d.f * d.s - std::norm(p.drive.omega_c)) / d.value;
}

Complex excitation_e3(const SystemParams& p, double delta_31) {
    const Denominator d = make_denominator(p, delta_31);
    const double x = delta_31 * p.coupling_a.tau + p.phase_a();
    const Complex sum = phase_sum(p.coupling_a.n_points, x);
    if (d.reduced) return p.g31() * sum / d.value;
    return d.f * p.g31() * sum / d.value;
}

Complex steady_rho31_analytic(const SystemParams& p, double delta_31) {
    const Denominator d = make_denominator(p, delta_31);
    const double x = delta_31 * p.coupling_a.tau + p.phase_a();
    const Complex sum = phase_sum(p.coupling_a.n_points, x);
    const Complex drive = p.probe.omega_p * sum / (2.0 * kPi);
    if (d.reduced) return drive / d.value;
    return d.f * drive / d.value;
}

}  // namespace geit
