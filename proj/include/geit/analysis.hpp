#pragma once

// Spectrum-level analysis: probe sweeps, transparency-window measurement and
// prediction, single-photon resonance and decoherence-free-point location, and the
// scan for waveguide-B interval times that eliminate the collective |2> decay.

#include <string>
#include <vector>

#include "geit/types.hpp"

namespace geit {

struct DetuningGrid {
    double min = -2.0;
    double max = 2.0;
    int count = 2001;
    void validate() const;               // throws ValidationError
    std::vector<double> values() const;  // uniform, strictly increasing
};

struct SpectrumPoint {
    double delta_31;
    Complex t;             // transmission amplitude
    double transmittance;  // |t|^2
    double lamb_shift;     // collective shift of |3>
    double decay_eff;      // collective decay of |3>
    double shift_b;        // collective shift of |2> (detuning-independent)
    double decay_b;        // collective decay of |2>
};
using Spectrum = std::vector<SpectrumPoint>;

// Evaluate the closed-form transport on a detuning grid (deterministic order).
Spectrum sweep_spectrum(const SystemParams& p, const DetuningGrid& grid);

struct WindowReport {
    double center;     // detuning of maximum transmittance within the window
    double width;      // half width at half height between the flanking minima
    double predicted;  // |omega_c|^2 / decay_eff(center)
    std::string regime;  // "EIT" or "ATS"
};

// Measure the transparency feature near the two-photon resonance. Throws
// NoWindowFound when omega_c == 0 or the feature is not resolved on the grid.
WindowReport transparency_window(const SystemParams& p, const Spectrum& spectrum);

// "ATS" when |omega_c| > threshold_factor * decay_eff(center), else "EIT" (tie: EIT).
std::string regime_label(const SystemParams& p, double threshold_factor = 0.5);

// Roots of delta_31 - lamb_shift = 0 in [lo, hi]: dense pre-scan plus bisection.
std::vector<double> single_photon_resonances(const SystemParams& p, double lo, double hi,
                                             int scan_points = 10000);

struct DfReport {
    std::vector<double> points;  // detunings where the collective decay vanishes
    bool whole_range = false;    // tau == 0 (or coupling off) with vanishing decay everywhere
};

// Detunings in [lo, hi] with decay_eff = 0: exact enumeration for N = 2, dense
// scan with local refinement otherwise.
DfReport decoherence_free_points(const SystemParams& p, double lo, double hi,
                                 int scan_points = 10000);

// Waveguide-B interval times in [tau_lo, tau_hi] where the collective |2> decay
// vanishes: exact enumeration for M = 2, dense scan with refinement otherwise.
std::vector<double> elimination_scan(const SystemParams& p, double tau_lo, double tau_hi,
                                     int scan_points = 10000);

// Number of connected T < 0.5 runs on the grid, merging the pair split by the
// transparency spike at the two-photon resonance.
int absorption_feature_count(const SystemParams& p, const Spectrum& spectrum);

}  // namespace geit
