#include "geit/dde.hpp"

#include <cmath>

#include "geit/errors.hpp"
#include "geit/model.hpp"

namespace geit {

namespace {

constexpr Complex kI(0.0, 1.0);

// w * D[|a><b|] rho added into out (a == b gives the pure-dephasing superoperator).
void add_dissipator(DensityMatrix& out, const DensityMatrix& rho, int a, int b, double w) {
    if (w == 0.0) return;
    out(a, a) += w * rho(b, b);
    const double h = w / 2.0;
    for (int j = 0; j < 3; ++j) {
        out(b, j) -= h * rho(b, j);
        out(j, b) -= h * rho(j, b);
    }
}

// -i * shift * [ |l><l| , rho ] added into out.
void add_level_shift(DensityMatrix& out, const DensityMatrix& rho, int l, double shift) {
    if (shift == 0.0) return;
    const Complex c = -kI * shift;
    for (int j = 0; j < 3; ++j) {
        if (j == l) continue;
        out(l, j) += c * rho(l, j);
        out(j, l) -= c * rho(j, l);
    }
}

}  // namespace

DensityMatrix basis_state(int level) {
    if (level < 1 || level > 3) throw ValidationError("initial level must be 1, 2 or 3");
    DensityMatrix m = DensityMatrix::Zero();
    m(level - 1, level - 1) = 1.0;
    return m;
}

double trace_deviation(const DensityMatrix& rho) { return std::abs(rho.trace() - 1.0); }

double hermiticity_deviation(const DensityMatrix& rho) {
    return (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
}

DdeOperator::DdeOperator(const SystemParams& p, double delta_31) {
    p.validate();
    delta_31_ = delta_31;
    delta_32_ = p.drive.delta_32;
    omega_c_ = p.drive.omega_c;

    const int n = p.coupling_a.n_points;
    const int m = p.coupling_b.m_points;
    const double phi = p.phase_a();
    const double g31 = p.coupling_a.gamma_31;
    const double g21 = p.coupling_b.gamma_21;

    // Probe picks up the accumulated phase theta_k = (k-1)(delta_31 tau + phi) at each point.
    probe_amp_ = p.probe.omega_p * phase_sum(n, delta_31 * p.coupling_a.tau + phi);

    rate_13_ = p.atom.gamma_31 + n * g31;
    rate_23_ = p.atom.gamma_32;
    rate_12_ = m * g21;
    rate_22_ = p.atom.gamma_2_phi;
    rate_33_ = p.atom.gamma_3_phi;

    // Feedback terms; zero-lag contributions fold into the local rates/shifts.
    for (int k = 1; k < n; ++k) {
        const double rate = g31 * (n - k) * std::cos(k * phi);
        const double shift = g31 * (n - k) * std::sin(k * phi);
        if (rate == 0.0 && shift == 0.0) continue;
        const double lag = k * p.coupling_a.tau;
        if (lag > 0.0)
            terms_.push_back({lag, rate, shift, Channel::A});
        else {
            rate_13_ += 2.0 * rate;
            shift_3_ += shift;
        }
    }
    const double xb = p.atom.omega_21 * p.coupling_b.tau_tilde;
    for (int k = 1; k < m; ++k) {
        const double rate = g21 * (m - k) * std::cos(xb);
        const double shift = g21 * (m - k) * std::sin(xb);
        if (rate == 0.0 && shift == 0.0) continue;
        const double lag = k * p.coupling_b.tau_tilde;
        if (lag > 0.0)
            terms_.push_back({lag, rate, shift, Channel::B});
        else {
            rate_12_ += 2.0 * rate;
            shift_2_ += shift;
        }
    }
}

double DdeOperator::max_lag() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, t.lag);
    return m;
}

double DdeOperator::min_lag() const {
    double m = 0.0;
    for (const auto& t : terms_) m = (m == 0.0) ? t.lag : std::min(m, t.lag);
    return m;
}

DensityMatrix DdeOperator::local_rhs(double t, const DensityMatrix& rho) const {
    // Drive in the frame of the bare atomic transitions: the probe and control
    // oscillate at their respective detunings.
    const Complex probe = probe_amp_ * std::exp(-kI * (delta_31_ * t));
    const Complex ctrl = omega_c_ * std::exp(-kI * (delta_32_ * t));

    DensityMatrix h = DensityMatrix::Zero();
    h(2, 0) = probe;
    h(0, 2) = std::conj(probe);
    h(2, 1) = ctrl;
    h(1, 2) = std::conj(ctrl);
    h(1, 1) = shift_2_;
    h(2, 2) = shift_3_;

    DensityMatrix out = -kI * (h * rho - rho * h);
    add_dissipator(out, rho, 0, 2, rate_13_);
    add_dissipator(out, rho, 1, 2, rate_23_);
    add_dissipator(out, rho, 0, 1, rate_12_);
    add_dissipator(out, rho, 1, 1, rate_22_);
    add_dissipator(out, rho, 2, 2, rate_33_);
    return out;
}

DensityMatrix DdeOperator::delayed_rhs(std::size_t k, const DensityMatrix& rho_lagged) const {
    const DelayTerm& term = terms_.at(k);
    DensityMatrix out = DensityMatrix::Zero();
    if (term.channel == Channel::A) {
        add_level_shift(out, rho_lagged, 2, term.shift);
        add_dissipator(out, rho_lagged, 0, 2, 2.0 * term.rate);
    } else {
        add_level_shift(out, rho_lagged, 1, term.shift);
        add_dissipator(out, rho_lagged, 0, 1, 2.0 * term.rate);
    }
    return out;
}

DensityMatrix DdeOperator::rhs(double t, const DensityMatrix& rho,
                               std::span<const std::optional<DensityMatrix>> lagged) const {
    DensityMatrix out = local_rhs(t, rho);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (k < lagged.size() && lagged[k]) out += delayed_rhs(k, *lagged[k]);
    }
    return out;
}

DenseHistory::DenseHistory(double dt, std::size_t capacity) : dt_(dt), capacity_(capacity) {
    if (dt <= 0.0) throw ValidationError("history dt must be > 0");
    if (capacity < 2) capacity_ = 2;
}

void DenseHistory::push(double t, const DensityMatrix& rho, const DensityMatrix& drho) {
    nodes_.push_back({t, rho, drho});
    while (nodes_.size() > capacity_) nodes_.pop_front();
}

double DenseHistory::front_time() const {
    if (nodes_.empty()) throw MissingHistory("history buffer is empty");
    return nodes_.front().t;
}

double DenseHistory::back_time() const {
    if (nodes_.empty()) throw MissingHistory("history buffer is empty");
    return nodes_.back().t;
}

DensityMatrix DenseHistory::eval(double t) const {
    if (nodes_.empty()) throw MissingHistory("history buffer is empty");
    const double slack = 1e-9 * dt_;
    const double lo = nodes_.front().t;
    const double hi = nodes_.back().t;
    if (t < lo - slack || t > hi + slack)
        throw MissingHistory("lagged time outside the retained history span");
    if (nodes_.size() == 1) return nodes_.front().rho;

    auto idx = static_cast<std::ptrdiff_t>(std::floor((t - lo) / dt_));
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(nodes_.size()) - 2);
    const Node& n0 = nodes_[static_cast<std::size_t>(idx)];
    const Node& n1 = nodes_[static_cast<std::size_t>(idx) + 1];
    const double h = n1.t - n0.t;
    const double s = std::clamp((t - n0.t) / h, 0.0, 1.0);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * n0.rho + (h10 * h) * n0.drho + h01 * n1.rho + (h11 * h) * n1.drho;
}

namespace {

void check_finite(const DensityMatrix& rho, double t) {
    if (!rho.allFinite())
        throw NonFiniteState("non-finite density matrix at t = " + std::to_string(t));
}

}  // namespace

Trajectory integrate(const SystemParams& p, const DdeConfig& c) {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ValidationError("dt must be > 0 and finite");
    if (!(c.t_final > 0.0) || !std::isfinite(c.t_final))
        throw ValidationError("t_final must be > 0 and finite");

    const DdeOperator op(p, p.probe.delta_31);
    const double min_lag = op.min_lag();
    if (min_lag > 0.0 && c.dt > min_lag / 20.0 * (1.0 + 1e-12))
        throw StepSizeTooLarge("dt must be <= min(tau, tau~)/20 when feedback is active");

    const auto steps = std::max<long long>(1, std::llround(c.t_final / c.dt));
    const double dt = c.dt;
    const auto& terms = op.delay_terms();

    DensityMatrix rho = c.initial_state ? *c.initial_state : basis_state(c.initial_level);
    check_finite(rho, 0.0);

    const double max_lag = op.max_lag();
    const std::size_t capacity =
        max_lag > 0.0 ? static_cast<std::size_t>(std::ceil(max_lag / dt)) + 4 : 2;
    DenseHistory hist(dt, capacity);

    const int stride = c.output_stride > 0
                           ? c.output_stride
                           : std::max(1, static_cast<int>(steps / 4000));

    Trajectory traj;
    traj.dt = dt;
    traj.t0 = 0.0;
    traj.rho31.reserve(static_cast<std::size_t>(steps) + 1);

    // Lagged states for one RHS evaluation. A feedback term is gated off until the
    // emitted field has had time to return (t < lag) unless feed_history is set, in
    // which case the pre-t=0 history function supplies the state.
    std::vector<std::optional<DensityMatrix>> lagged(terms.size());
    const double slack = 1e-9 * dt;
    const auto fill_lagged = [&](double t) {
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const double tl = t - terms[k].lag;
            if (tl >= -slack) {
                lagged[k] = hist.eval(std::max(tl, 0.0));
            } else if (c.feed_history) {
                if (!c.history)
                    throw MissingHistory(
                        "feedback lookup precedes t = 0 and no history function is set");
                lagged[k] = c.history(tl);
            } else {
                lagged[k] = std::nullopt;
            }
        }
        return std::span<const std::optional<DensityMatrix>>(lagged);
    };

    const auto record = [&](long long k, const DensityMatrix& state) {
        traj.rho31.push_back(state(2, 0));
        traj.max_trace_dev = std::max(traj.max_trace_dev, trace_deviation(state));
        traj.max_herm_dev = std::max(traj.max_herm_dev, hermiticity_deviation(state));
        if (k % stride == 0 || k == steps) {
            traj.times.push_back(k * dt);
            traj.states.push_back(state);
        }
    };

    for (long long k = 0; k < steps; ++k) {
        const double t = k * dt;
        const DensityMatrix f = op.rhs(t, rho, fill_lagged(t));
        hist.push(t, rho, f);
        record(k, rho);

        const DensityMatrix k1 = f;
        const DensityMatrix k2 =
            op.rhs(t + dt / 2, (rho + (dt / 2) * k1).eval(), fill_lagged(t + dt / 2));
        const DensityMatrix k3 =
            op.rhs(t + dt / 2, (rho + (dt / 2) * k2).eval(), fill_lagged(t + dt / 2));
        const DensityMatrix k4 = op.rhs(t + dt, (rho + dt * k3).eval(), fill_lagged(t + dt));
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_finite(rho, t + dt);
    }
    const double t_end = steps * dt;
    hist.push(t_end, rho, op.rhs(t_end, rho, fill_lagged(t_end)));
    record(steps, rho);
    return traj;
}

Complex demodulate(const Trajectory& traj, double delta_31, double window, double drift_tol) {
    const double dt = traj.dt;
    if (!(window > 0.0)) throw ValidationError("demodulation window must be > 0");
    if (delta_31 != 0.0 && window < 4.0 * 2.0 * kPi / std::abs(delta_31) * (1.0 - 1e-12))
        throw ValidationError("demodulation window must span at least 4 probe periods");

    const auto total = static_cast<long long>(traj.rho31.size()) - 1;
    auto w = std::llround(window / dt);
    w += w % 2;  // Simpson needs an even interval count
    if (w < 2) throw ValidationError("demodulation window shorter than two steps");
    if (w > total) throw ValidationError("demodulation window exceeds the trajectory");
    if (drift_tol > 0.0 && 2 * w > total)
        throw ValidationError("trajectory too short for two demodulation windows");

    // (1/W) * integral of rho_31(t) e^{+i delta t} over [t_end - W, t_end], Simpson rule.
    const auto average = [&](long long first) {
        Complex acc = 0.0;
        for (long long j = 0; j <= w; ++j) {
            const long long k = first + j;
            const double t = traj.t0 + k * dt;
            const double weight = (j == 0 || j == w) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            acc += weight * traj.rho31[static_cast<std::size_t>(k)] *
                   Complex(std::cos(delta_31 * t), std::sin(delta_31 * t));
        }
        return acc * (dt / 3.0) / (w * dt);
    };

    const Complex d1 = average(total - w);
    if (drift_tol > 0.0) {
        const Complex d0 = average(total - 2 * w);
        const double scale = std::max(std::abs(d1), std::abs(d0));
        if (scale > 1e-13 && std::abs(d1 - d0) / scale > drift_tol)
            throw NotConverged("demodulated amplitude drifts between consecutive windows");
    }
    return d1;
}

DdeResult run_dde(const SystemParams& p, const DdeConfig& c) {
    DdeResult out;
    out.trajectory = integrate(p, c);
    out.rho31_tilde = demodulate(out.trajectory, p.probe.delta_31, c.demod_window, c.demod_tol);
    return out;
}

}  // namespace geit
