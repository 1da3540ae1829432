#include "geit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "geit/errors.hpp"
#include "geit/model.hpp"

namespace geit {

void DetuningGrid::validate() const {
    if (count < 1) throw ValidationError("grid count must be >= 1");
    if (!std::isfinite(min) || !std::isfinite(max)) throw ValidationError("grid bounds must be finite");
    if (count > 1 && !(max > min)) throw ValidationError("grid max must be > min");
}

std::vector<double> DetuningGrid::values() const {
    validate();
    if (count == 1) return {min};
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[i] = min + (max - min) * i / (count - 1);
    return v;
}

Spectrum sweep_spectrum(const SystemParams& p, const DetuningGrid& grid) {
    p.validate();
    const double sb = shift_b(p);
    const double db = decay_b(p);
    Spectrum out;
    for (double d : grid.values()) {
        SpectrumPoint pt;
        pt.delta_31 = d;
        pt.t = transmission(p, d);
        pt.transmittance = std::norm(pt.t);
        pt.lamb_shift = lamb_shift_a(p, d);
        pt.decay_eff = decay_a(p, d);
        pt.shift_b = sb;
        pt.decay_b = db;
        out.push_back(pt);
    }
    return out;
}

namespace {

// Linear interpolation of the detuning where T crosses `level` between grid nodes
// i and j (neighbours).
double cross_position(const Spectrum& s, int i, int j, double level) {
    const double t0 = s[static_cast<std::size_t>(i)].transmittance;
    const double t1 = s[static_cast<std::size_t>(j)].transmittance;
    const double x0 = s[static_cast<std::size_t>(i)].delta_31;
    const double x1 = s[static_cast<std::size_t>(j)].delta_31;
    if (t1 == t0) return (x0 + x1) / 2.0;
    return x0 + (level - t0) * (x1 - x0) / (t1 - t0);
}

// Golden-section minimizer for smooth non-negative scans.
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

// Scan f on [lo, hi], refine every local minimum, keep those with f < threshold.
std::vector<double> scan_for_zeros(const std::function<double(double)>& f, double lo,
                                   double hi, int scan_points, double threshold) {
    if (!(hi > lo)) throw ValidationError("scan range must satisfy hi > lo");
    if (scan_points < 3) throw ValidationError("scan_points must be >= 3");
    const double h = (hi - lo) / scan_points;
    std::vector<double> vals(static_cast<std::size_t>(scan_points) + 1);
    for (int i = 0; i <= scan_points; ++i) vals[static_cast<std::size_t>(i)] = f(lo + i * h);

    std::vector<double> zeros;
    for (int i = 0; i <= scan_points; ++i) {
        const bool left_ok = (i == 0) || vals[i - 1] >= vals[i];
        const bool right_ok = (i == scan_points) || vals[i + 1] >= vals[i];
        if (!(left_ok && right_ok)) continue;
        const double a = lo + std::max(0, i - 1) * h;
        const double b = lo + std::min(scan_points, i + 1) * h;
        const double x = (a == b) ? a : golden_min(f, a, b);
        if (f(x) < threshold) {
            if (zeros.empty() || x - zeros.back() > h / 2.0) zeros.push_back(x);
        }
    }
    return zeros;
}

// Enumerate x-values `period`-periodic at offset in [x_lo, x_hi], mapped back to the
// underlying variable via x = var * slope + intercept.
std::vector<double> enumerate_phase_hits(double slope, double intercept, double lo, double hi,
                                         const std::function<bool(long long)>& keep,
                                         double modulus) {
    // solutions of slope * var + intercept = j * modulus with keep(j)
    std::vector<double> out;
    const double x_lo = slope * lo + intercept;
    const double x_hi = slope * hi + intercept;
    const double a = std::min(x_lo, x_hi), b = std::max(x_lo, x_hi);
    const long long j0 = static_cast<long long>(std::ceil(a / modulus - 1e-12));
    const long long j1 = static_cast<long long>(std::floor(b / modulus + 1e-12));
    for (long long j = j0; j <= j1; ++j) {
        if (!keep(j)) continue;
        const double var = (j * modulus - intercept) / slope;
        if (var >= lo - 1e-12 && var <= hi + 1e-12) out.push_back(std::clamp(var, lo, hi));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

WindowReport transparency_window(const SystemParams& p, const Spectrum& s) {
    if (std::abs(p.drive.omega_c) == 0.0)
        throw NoWindowFound("no control drive, no transparency window");
    const int n = static_cast<int>(s.size());
    if (n < 7) throw NoWindowFound("spectrum grid too small to resolve a window");

    // The transparency sits at the two-photon resonance Delta_F = 0.
    const double target = p.drive.delta_32 + shift_b(p);
    int c = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(s[i].delta_31 - target) < std::abs(s[c].delta_31 - target)) c = i;
    if (c == 0 || c == n - 1) throw NoWindowFound("two-photon resonance outside the grid");

    // Walk outward to the flanking local minima of T.
    int il = c;
    while (il > 0 && s[il - 1].transmittance <= s[il].transmittance) --il;
    int ir = c;
    while (ir < n - 1 && s[ir + 1].transmittance <= s[ir].transmittance) ++ir;
    if (il == c || ir == c || il == 0 || ir == n - 1)
        throw NoWindowFound("transparency feature has no flanking absorption minima");

    // Maximum transmittance inside the window defines the reported center.
    int imax = il;
    for (int i = il; i <= ir; ++i)
        if (s[i].transmittance > s[imax].transmittance) imax = i;
    const double t_top = s[imax].transmittance;

    // Half-height crossing on each side, measured from the center outward.
    const double level_l = (t_top + s[il].transmittance) / 2.0;
    const double level_r = (t_top + s[ir].transmittance) / 2.0;
    if (!(t_top > level_l && t_top > level_r))
        throw NoWindowFound("window is not higher than its flanks");
    double xl = s[il].delta_31, xr = s[ir].delta_31;
    bool found_l = false, found_r = false;
    for (int i = imax; i > il; --i)
        if (s[i - 1].transmittance <= level_l) {
            xl = cross_position(s, i - 1, i, level_l);
            found_l = true;
            break;
        }
    for (int i = imax; i < ir; ++i)
        if (s[i + 1].transmittance <= level_r) {
            xr = cross_position(s, i, i + 1, level_r);
            found_r = true;
            break;
        }
    if (!found_l || !found_r || !(xr > xl))
        throw NoWindowFound("half-height crossings not resolved on the grid");
    if (ir - il < 4) throw NoWindowFound("window spans too few grid points");

    const double gamma_eff = decay_a(p, target);
    if (!(gamma_eff > 0.0))
        throw NoWindowFound("collective decay vanishes at the window center");

    WindowReport w;
    w.center = s[imax].delta_31;
    w.width = (xr - xl) / 2.0;
    w.predicted = std::norm(p.drive.omega_c) / gamma_eff;
    w.regime = regime_label(p);
    return w;
}

std::string regime_label(const SystemParams& p, double threshold_factor) {
    const double center = p.drive.delta_32 + shift_b(p);
    return std::abs(p.drive.omega_c) > threshold_factor * decay_a(p, center) ? "ATS" : "EIT";
}

std::vector<double> single_photon_resonances(const SystemParams& p, double lo, double hi,
                                             int scan_points) {
    p.validate();
    if (!(hi > lo)) throw ValidationError("resonance range must satisfy hi > lo");
    if (scan_points < 3) throw ValidationError("scan_points must be >= 3");
    const auto f = [&](double d) { return delta_s(p, d); };

    const double h = (hi - lo) / scan_points;
    std::vector<double> roots;
    double x0 = lo, f0 = f(lo);
    for (int i = 1; i <= scan_points; ++i) {
        const double x1 = lo + i * h;
        const double f1 = f(x1);
        if (f0 == 0.0) roots.push_back(x0);
        if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 200 && (b - a) > 2e-16 * (1.0 + std::abs(a) + std::abs(b));
                 ++it) {
                const double m = (a + b) / 2.0;
                const double fm = f(m);
                if (fm == 0.0) { a = b = m; break; }
                if ((fa < 0.0) == (fm < 0.0)) { a = m; fa = fm; }
                else b = m;
            }
            roots.push_back((a + b) / 2.0);
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) roots.push_back(hi);

    std::sort(roots.begin(), roots.end());
    std::vector<double> dedup;
    for (double r : roots)
        if (dedup.empty() || r - dedup.back() > h / 2.0) dedup.push_back(r);
    return dedup;
}

DfReport decoherence_free_points(const SystemParams& p, double lo, double hi, int scan_points) {
    p.validate();
    if (!(hi > lo)) throw ValidationError("range must satisfy hi > lo");
    const int n = p.coupling_a.n_points;
    const double gamma = p.coupling_a.gamma_31;
    const double threshold = 1e-10 * (gamma > 0.0 ? gamma : 1.0);

    DfReport rep;
    if (gamma == 0.0 || n == 0) {  // coupling off: decay vanishes identically
        rep.whole_range = true;
        return rep;
    }
    if (p.coupling_a.tau == 0.0) {
        // All points coincide; the decay is detuning-independent.
        if (decay_a(p, lo) < threshold) rep.whole_range = true;
        return rep;
    }
    if (n == 1) return rep;  // single point: decay gamma/2 never vanishes

    if (n == 2) {
        // 2 gamma cos^2(x/2) vanishes exactly at x = (odd) pi.
        rep.points = enumerate_phase_hits(p.coupling_a.tau, p.phase_a(), lo, hi,
                                          [](long long j) { return j % 2 != 0; }, kPi);
        return rep;
    }
    rep.points = scan_for_zeros([&](double d) { return decay_a(p, d); }, lo, hi, scan_points,
                                threshold);
    return rep;
}

std::vector<double> elimination_scan(const SystemParams& p, double tau_lo, double tau_hi,
                                     int scan_points) {
    p.validate();
    if (!(tau_hi > tau_lo) || tau_lo < 0.0)
        throw ValidationError("elimination range must satisfy 0 <= tau_lo < tau_hi");
    const int m = p.coupling_b.m_points;
    if (m < 2 || p.coupling_b.gamma_21 == 0.0) return {};  // decay never vanishes or is vacuous
    const double wb = p.omega_beta();
    const double threshold = 1e-12 * p.coupling_b.gamma_21;

    if (m == 2 && wb > 0.0) {
        // 2 gamma cos^2(wb tau/2) vanishes exactly at wb tau = (odd) pi.
        return enumerate_phase_hits(wb, 0.0, tau_lo, tau_hi,
                                    [](long long j) { return j % 2 != 0; }, kPi);
    }
    const auto decay_at = [&](double tau) {
        return p.coupling_b.gamma_21 * half_power_sum(m, wb * tau);
    };
    return scan_for_zeros(decay_at, tau_lo, tau_hi, scan_points, threshold);
}

int absorption_feature_count(const SystemParams& p, const Spectrum& s) {
    const double target = p.drive.delta_32 + shift_b(p);
    int count = 0;
    bool in_run = false;
    double run_end = 0.0;
    for (const auto& pt : s) {
        const bool low = pt.transmittance < 0.5;
        if (low && !in_run) {
            // Merge with the previous run when the gap holds the transparency spike.
            const bool merge = count > 0 && run_end < target && target < pt.delta_31;
            if (!merge) ++count;
            in_run = true;
        } else if (!low && in_run) {
            in_run = false;
        }
        if (low) run_end = pt.delta_31;
    }
    return count;
}

}  // namespace geit
