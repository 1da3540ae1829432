#pragma once

// Command-line front end: subcommand dispatch, config loading, output-file
// placement, and the randomized closed-form-vs-solver cross-check.

#include <cstdint>
#include <random>
#include <string>

#include "geit/types.hpp"

namespace geit {

// Deterministic uniform deviate in [0, 1) built from the top 53 bits of a
// 64-bit engine draw; identical across platforms for a given seed.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// One randomized parameter set for the closed-form / direct-solver comparison:
// N in 1..4, M in 0..3, interval times in [0, 10], |omega_c| in [0, 2], random
// drive phase and detunings. `lossy` adds intrinsic widths to |2> and |3>.
// Consumes a fixed number of engine draws regardless of `lossy`.
SystemParams random_cross_check_params(std::mt19937_64& rng, bool lossy);

// |a - b| / max(|a|, |b|); zero when both vanish.
double relative_deviation(Complex a, Complex b);

struct OracleCheckReport {
    std::uint64_t seed = 0;
    int draws = 0;
    double tolerance = 0.0;
    double max_dev_t = 0.0;      // worst transmission deviation over all draws
    double max_dev_e3 = 0.0;     // worst |3>-amplitude deviation
    double max_flux_dev = 0.0;   // worst flux-conservation deviation (lossless draws)
    int failures = 0;            // draws exceeding the tolerance
    bool pass = false;
};

// Alternates lossless/lossy draws (even/odd index) and compares the closed-form
// transmission and e3 against the boundary-condition solve for each.
OracleCheckReport oracle_check(std::uint64_t seed, int draws, double tolerance);

// Canonical report rendering; identical bytes for identical inputs.
std::string oracle_check_json(const OracleCheckReport& report);

// Full command-line entry point; returns the process exit code:
//   0 success, 2 invalid input/config, 3 degenerate or singular system,
//   4 not converged / no feature found, 1 other failure.
int cli_main(int argc, const char* const* argv);

}  // namespace geit
