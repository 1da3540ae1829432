#include "geit/scattering.hpp"

#include <cmath>
#include <complex>

#include "geit/errors.hpp"

namespace geit {

namespace {

constexpr double kPivotThreshold = 1e-14;

Complex phase(double arg) { return Complex(std::cos(arg), std::sin(arg)); }

}  // namespace

std::pair<Eigen::MatrixXcd, Eigen::VectorXcd> assemble_system(const SystemParams& p,
                                                              double delta_31) {
    const int n = p.coupling_a.n_points;
    const int m = p.coupling_b.m_points;
    const int dim = 2 * n + 2 * m + 2;
    const Complex i(0.0, 1.0);

    const double step_a = delta_31 * p.coupling_a.tau + p.phase_a();   // phase per A interval
    const double step_b = p.omega_beta() * p.coupling_b.tau_tilde;     // phase per B interval
    const double g_a = p.g31();
    const double g_b = p.g21();

    // Unknown ordering: [t_1..t_N, r_1..r_N, tb_1..tb_M, rb_1..rb_M, e2, e3].
    const auto t_idx = [&](int k) { return k - 1; };            // k in 1..N
    const auto r_idx = [&](int k) { return n + k - 1; };        // k in 1..N
    const auto tb_idx = [&](int k) { return 2 * n + k - 1; };   // k in 1..M
    const auto rb_idx = [&](int k) { return 2 * n + m + k - 1; };
    const int e2_idx = 2 * n + 2 * m;
    const int e3_idx = e2_idx + 1;

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim);
    int row = 0;

    // Jump conditions across each A point: integrating the mode equations over the
    // delta potential relates the coefficients on the two sides to the atomic
    // amplitude e3. theta_k is the accumulated plane-wave phase at x_k.
    for (int k = 1; k <= n; ++k) {
        const Complex ph = phase((k - 1) * step_a);
        // -i v (t_k - t_{k-1}) e^{i theta_k} + g e3 = 0, t_0 == 1.
        a(row, t_idx(k)) = -i * p.v_g * ph;
        if (k > 1)
            a(row, t_idx(k - 1)) = i * p.v_g * ph;
        else
            b(row) = -i * p.v_g * ph;
        a(row, e3_idx) = g_a;
        ++row;
        // +i v (r_{k+1} - r_k) e^{-i theta_k} + g e3 = 0, r_{N+1} == 0.
        a(row, r_idx(k)) = -i * p.v_g / ph;
        if (k < n) a(row, r_idx(k + 1)) = i * p.v_g / ph;
        a(row, e3_idx) = g_a;
        ++row;
    }

    // Same structure at each B point, sourced by e2; nothing is incident in B.
    for (int k = 1; k <= m; ++k) {
        const Complex ph = phase((k - 1) * step_b);
        a(row, tb_idx(k)) = -i * p.v_g_tilde * ph;
        if (k > 1) a(row, tb_idx(k - 1)) = i * p.v_g_tilde * ph;
        a(row, e2_idx) = g_b;
        ++row;
        a(row, rb_idx(k)) = -i * p.v_g_tilde / ph;
        if (k < m) a(row, rb_idx(k + 1)) = i * p.v_g_tilde / ph;
        a(row, e2_idx) = g_b;
        ++row;
    }

    // Atom rows with the mean-value regularization of the field at each point,
    // phi(x_k) -> (phi(x_k+) + phi(x_k-)) / 2.
    // (delta_31 + i gamma_3 / 2) e3 = omega_c e2 + g_a sum_k [mean fields at x_k]
    a(row, e3_idx) = Complex(delta_31, p.atom.gamma_3 / 2.0);
    a(row, e2_idx) = -p.drive.omega_c;
    for (int k = 1; k <= n; ++k) {
        const Complex ph = phase((k - 1) * step_a);
        a(row, t_idx(k)) -= g_a * ph / 2.0;
        if (k > 1)
            a(row, t_idx(k - 1)) -= g_a * ph / 2.0;
        else
            b(row) += g_a * ph / 2.0;
        a(row, r_idx(k)) -= g_a / ph / 2.0;
        if (k < n) a(row, r_idx(k + 1)) -= g_a / ph / 2.0;
    }
    ++row;

    // (delta_31 - delta_32 + i gamma_2 / 2) e2 = conj(omega_c) e3 + g_b sum_k [mean B fields]
    a(row, e2_idx) = Complex(delta_31 - p.drive.delta_32, p.atom.gamma_2 / 2.0);
    a(row, e3_idx) = -std::conj(p.drive.omega_c);
    for (int k = 1; k <= m; ++k) {
        const Complex ph = phase((k - 1) * step_b);
        a(row, tb_idx(k)) -= g_b * ph / 2.0;
        if (k > 1) a(row, tb_idx(k - 1)) -= g_b * ph / 2.0;
        a(row, rb_idx(k)) -= g_b / ph / 2.0;
        if (k < m) a(row, rb_idx(k + 1)) -= g_b / ph / 2.0;
    }

    // An atom row can vanish identically when its level is fully decoupled and
    // exactly on resonance (e.g. omega_c = 0, M = 0, delta_31 = delta_32, gamma_2 = 0).
    // The amplitude is then a free dark variable; pin it to the physical value 0
    // instead of reporting a singular system.
    for (int level_row : {dim - 2, dim - 1}) {
        const int col = level_row == dim - 2 ? e3_idx : e2_idx;
        if (a.row(level_row).cwiseAbs().maxCoeff() == 0.0 && b(level_row) == Complex(0.0))
            a(level_row, col) = 1.0;
    }

    return {std::move(a), std::move(b)};
}

ScatteringSolution solve_amplitudes(const SystemParams& p, double delta_31) {
    p.validate();
    auto [a, b] = assemble_system(p, delta_31);

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    lu.setThreshold(kPivotThreshold);
    if (!lu.isInvertible())
        throw SingularSystem("boundary-condition system is singular at pivot threshold 1e-14");
    const Eigen::VectorXcd x = lu.solve(b);

    const int n = p.coupling_a.n_points;
    const int m = p.coupling_b.m_points;
    ScatteringSolution s;
    s.delta_31 = delta_31;
    s.t = x.segment(0, n);
    s.r = x.segment(n, n);
    s.t_b = x.segment(2 * n, m);
    s.r_b = x.segment(2 * n + m, m);
    s.e2 = x(2 * n + 2 * m);
    s.e3 = x(2 * n + 2 * m + 1);
    const double bnorm = b.norm();
    s.residual = bnorm > 0.0 ? (a * x - b).norm() / bnorm : (a * x).norm();
    return s;
}

FieldProfile field_profile(const ScatteringSolution& s, const SystemParams& p,
                           int sample_count, Channel channel) {
    if (sample_count < 2) throw ValidationError("sample_count must be >= 2");

    const bool is_a = (channel == Channel::A);
    const int count = is_a ? p.coupling_a.n_points : p.coupling_b.m_points;
    const double v = is_a ? p.v_g : p.v_g_tilde;
    const double tau = is_a ? p.coupling_a.tau : p.coupling_b.tau_tilde;
    const double d = v * tau;
    const double step_phase =
        is_a ? s.delta_31 * p.coupling_a.tau + p.phase_a() : p.omega_beta() * p.coupling_b.tau_tilde;
    const double alpha = d > 0.0 ? step_phase / d : 0.0;  // wavevector of the piecewise ansatz
    const Eigen::VectorXcd& tc = is_a ? s.t : s.t_b;
    const Eigen::VectorXcd& rc = is_a ? s.r : s.r_b;
    const Complex incident = is_a ? Complex(1.0) : Complex(0.0);

    const double span = (count - 1) * d;
    const double pad = d > 0.0 ? d : 1.0;
    const double lo = -pad;
    const double hi = span + pad;

    FieldProfile f;
    f.positions.resize(sample_count);
    f.right_amp.resize(sample_count);
    f.left_amp.resize(sample_count);
    for (int j = 0; j < sample_count; ++j) {
        const double x = lo + (hi - lo) * j / (sample_count - 1);
        // Interval index: number of coupling points at or left of x.
        int k = 0;
        while (k < count && x >= k * d - 1e-15 * (1.0 + std::abs(x))) ++k;
        if (d == 0.0) k = (x >= 0.0) ? count : 0;
        const Complex tcoef = k == 0 ? incident : tc(k - 1);
        const Complex rcoef = k == count ? Complex(0.0) : rc(k);
        f.positions[j] = x;
        f.right_amp[j] = tcoef * Complex(std::cos(alpha * x), std::sin(alpha * x));
        f.left_amp[j] = rcoef * Complex(std::cos(alpha * x), -std::sin(alpha * x));
    }
    return f;
}

double flux_deviation(const ScatteringSolution& s, const SystemParams& p) {
    const double incident = p.v_g;
    const double outgoing =
        p.v_g * (std::norm(s.transmitted()) + std::norm(s.reflected())) +
        p.v_g_tilde * (std::norm(s.transmitted_b()) + std::norm(s.reflected_b()));
    return std::abs(outgoing - incident) / incident;
}

}  // namespace geit
