#pragma once

// Time-delayed Lindblad master equation for the three-level atom: local drive and
// dissipation plus feedback terms that act on the density matrix at earlier times
// t - n*tau (waveguide A) and t - m*tau~ (waveguide B). Integrated by the method of
// steps with fixed-step RK4; lagged states come from cubic Hermite interpolation of
// the stored trajectory.

#include <Eigen/Dense>
#include <complex>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "geit/types.hpp"

namespace geit {

using DensityMatrix = Eigen::Matrix3cd;

// |level><level| with level in {1, 2, 3}.
DensityMatrix basis_state(int level);

double trace_deviation(const DensityMatrix& rho);    // |tr(rho) - 1|
double hermiticity_deviation(const DensityMatrix& rho);  // max |rho - rho^dagger|

// One feedback term of the master equation.
struct DelayTerm {
    double lag;     // n * tau (channel A) or m * tau~ (channel B), > 0
    double rate;    // Gamma'_31 or Gamma''_21 (may be negative)
    double shift;   // Delta'_L or Delta''_r
    Channel channel = Channel::A;
};

// Right-hand side of the delayed master equation at fixed probe detuning.
// Zero-lag feedback terms (tau == 0) are folded into the local part.
class DdeOperator {
public:
    DdeOperator(const SystemParams& p, double delta_31);

    const std::vector<DelayTerm>& delay_terms() const { return terms_; }
    double max_lag() const;
    double min_lag() const;  // smallest positive lag; 0 when no delayed term is active

    // d rho / dt given the current state and one lagged state per delay term
    // (std::nullopt = term gated off, e.g. before the feedback has returned).
    DensityMatrix rhs(double t, const DensityMatrix& rho,
                      std::span<const std::optional<DensityMatrix>> lagged) const;

    // Local part only (drive, folded shifts, local dissipators).
    DensityMatrix local_rhs(double t, const DensityMatrix& rho) const;
    // Contribution of delay term k evaluated on a lagged state.
    DensityMatrix delayed_rhs(std::size_t k, const DensityMatrix& rho_lagged) const;

private:
    double delta_31_;
    double delta_32_;
    Complex probe_amp_;   // omega_p * sum_n exp(i theta_n)
    Complex omega_c_;
    double shift_2_ = 0;  // folded Hamiltonian shift on |2><2|
    double shift_3_ = 0;  // folded Hamiltonian shift on |3><3|
    double rate_13_ = 0;  // D[|1><3|] weight
    double rate_23_ = 0;  // D[|2><3|] weight
    double rate_12_ = 0;  // D[|1><2|] weight
    double rate_22_ = 0;  // D[|2><2|] weight (pure dephasing)
    double rate_33_ = 0;  // D[|3><3|] weight (pure dephasing)
    std::vector<DelayTerm> terms_;
};

// Uniformly spaced trajectory tail supporting cubic Hermite evaluation at arbitrary
// times within the retained span; used for the lagged-state lookups.
class DenseHistory {
public:
    DenseHistory(double dt, std::size_t capacity);
    void push(double t, const DensityMatrix& rho, const DensityMatrix& drho);
    DensityMatrix eval(double t) const;  // throws MissingHistory outside the span
    double front_time() const;
    double back_time() const;
    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        double t;
        DensityMatrix rho;
        DensityMatrix drho;
    };
    double dt_;
    std::size_t capacity_;
    std::deque<Node> nodes_;
};

struct DdeConfig {
    double dt = 5e-3;
    double t_final = 300.0;
    int initial_level = 1;                          // rho(0) = |level><level|
    std::optional<DensityMatrix> initial_state;     // overrides initial_level when set
    std::function<DensityMatrix(double)> history;   // rho(t <= 0) for feed_history mode
    bool feed_history = false;  // evaluate feedback on pre-t=0 history instead of gating
    double demod_window = 60.0;
    double demod_tol = 0.05;    // window-to-window drift tolerance (0 disables the check)
    int output_stride = 0;      // decimation of stored states; 0 = auto (~4000 samples)
};

struct Trajectory {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<double> times;               // decimated sample times (always includes start/end)
    std::vector<DensityMatrix> states;       // states at `times`
    std::vector<Complex> rho31;              // rho_31 at every step, from t0
    double max_trace_dev = 0.0;
    double max_herm_dev = 0.0;

    const DensityMatrix& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

// Integrate the delayed master equation at probe detuning p.probe.delta_31.
Trajectory integrate(const SystemParams& p, const DdeConfig& c);

// Amplitude of the e^{-i delta_31 t} component of rho_31 over the terminal window
// (plain time average when delta_31 == 0). When drift_tol > 0 the result is compared
// against the preceding window and NotConverged is thrown if they disagree.
Complex demodulate(const Trajectory& traj, double delta_31, double window,
                   double drift_tol = 0.0);

struct DdeResult {
    Trajectory trajectory;
    Complex rho31_tilde;
};

// Integrate and demodulate in one go, using the config's window and tolerance.
DdeResult run_dde(const SystemParams& p, const DdeConfig& c);

}  // namespace geit
