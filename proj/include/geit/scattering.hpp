#pragma once

// Brute-force single-photon scattering solver: assembles the delta-potential jump
// conditions and atom equations into a dense (2N + 2M + 2)-dimensional complex linear
// system and solves it directly. Serves as the independent cross-check for the
// closed-form transport amplitudes.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "geit/types.hpp"

namespace geit {

struct ScatteringSolution {
    double delta_31 = 0.0;
    Eigen::VectorXcd t;    // A-waveguide right-mover coefficients t_1..t_N (t_0 == 1 implicit)
    Eigen::VectorXcd r;    // A-waveguide left-mover coefficients r_1..r_N (r_{N+1} == 0 implicit)
    Eigen::VectorXcd t_b;  // B-waveguide right-mover coefficients (size M, none incident)
    Eigen::VectorXcd r_b;  // B-waveguide left-mover coefficients (size M)
    Complex e2 = 0.0;      // |2> amplitude of the scattering eigenstate
    Complex e3 = 0.0;      // |3> amplitude
    double residual = 0.0; // relative residual |A x - b| / |b| of the solve

    Complex transmitted() const { return t.size() ? t(t.size() - 1) : Complex(1.0); }
    Complex reflected() const { return r.size() ? r(0) : Complex(0.0); }
    Complex transmitted_b() const { return t_b.size() ? t_b(t_b.size() - 1) : Complex(0.0); }
    Complex reflected_b() const { return r_b.size() ? r_b(0) : Complex(0.0); }
};

// Sampled piecewise plane-wave field along one waveguide.
struct FieldProfile {
    std::vector<double> positions;
    std::vector<Complex> right_amp;
    std::vector<Complex> left_amp;
};

// Boundary-condition matrix and right-hand side; unknown ordering
// [t_1..t_N, r_1..r_N, tb_1..tb_M, rb_1..rb_M, e2, e3].
std::pair<Eigen::MatrixXcd, Eigen::VectorXcd> assemble_system(const SystemParams& p,
                                                              double delta_31);

// Dense direct solve; throws SingularSystem when the matrix is rank-deficient at the
// pivot threshold 1e-14.
ScatteringSolution solve_amplitudes(const SystemParams& p, double delta_31);

// Piecewise field amplitudes sampled across the coupling region (plus margins).
FieldProfile field_profile(const ScatteringSolution& s, const SystemParams& p,
                           int sample_count, Channel channel = Channel::A);

// |outgoing flux - incident flux| / incident flux; zero for lossless parameters.
double flux_deviation(const ScatteringSolution& s, const SystemParams& p);

}  // namespace geit
