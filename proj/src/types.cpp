#include "geit/types.hpp"

#include <cmath>

#include "geit/errors.hpp"

namespace geit {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void SystemParams::validate() const {
    require(finite(atom.omega_21) && finite(atom.omega_31), "atom frequencies must be finite");
    require(atom.omega_21 > 0.0, "omega_21 must be > 0");
    require(atom.omega_31 > atom.omega_21, "omega_31 must be > omega_21");
    require(atom.gamma_2 >= 0.0, "gamma_2 must be >= 0");
    require(atom.gamma_3 >= 0.0, "gamma_3 must be >= 0");
    require(atom.gamma_2_phi >= 0.0, "gamma_2_phi must be >= 0");
    require(atom.gamma_3_phi >= 0.0, "gamma_3_phi must be >= 0");
    require(atom.gamma_31 >= 0.0, "gamma_31 (non-guided) must be >= 0");
    require(atom.gamma_32 >= 0.0, "gamma_32 (non-guided) must be >= 0");

    require(coupling_a.n_points >= 1, "n_points must be >= 1");
    require(coupling_a.tau >= 0.0 && finite(coupling_a.tau), "tau must be >= 0 and finite");
    require(coupling_a.gamma_31 >= 0.0, "coupling_a.gamma_31 must be >= 0");
    if (coupling_a.phi) require(finite(*coupling_a.phi), "phi must be finite");

    require(coupling_b.m_points >= 0, "m_points must be >= 0");
    require(coupling_b.tau_tilde >= 0.0 && finite(coupling_b.tau_tilde),
            "tau_tilde must be >= 0 and finite");
    require(coupling_b.gamma_21 >= 0.0, "coupling_b.gamma_21 must be >= 0");
    if (coupling_b.omega_beta)
        require(finite(*coupling_b.omega_beta), "omega_beta must be finite");

    require(finite(drive.omega_c.real()) && finite(drive.omega_c.imag()),
            "omega_c must be finite");
    require(finite(drive.delta_32), "delta_32 must be finite");
    require(probe.omega_p >= 0.0, "omega_p must be >= 0");
    require(finite(probe.delta_31), "probe delta_31 must be finite");

    require(v_g > 0.0, "v_g must be > 0");
    require(v_g_tilde > 0.0, "v_g_tilde must be > 0");
    require(epsilon > 0.0, "epsilon must be > 0");
}

}  // namespace geit
