#pragma once

#include <stdexcept>
#include <string>

namespace geit {

// Parameter or configuration value violates a documented invariant.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Config text is malformed; line/column are 1-based and point at the offending token.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

// Closed-form denominator magnitude fell below epsilon: all dampings vanish at an
// exact resonance, so the scattering amplitude is not defined at this parameter corner.
struct DegenerateDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The assembled boundary-condition system is singular at the pivot threshold.
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integration step exceeds the stability/accuracy bound dt <= min(tau, tau~)/20.
struct StepSizeTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A state produced by the integrator contains NaN or Inf entries.
struct NonFiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A delayed-term lookup preceded t = 0 and no history function was supplied.
struct MissingHistory : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Steady state not reached: consecutive demodulation windows disagree beyond tolerance.
struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No resolvable transparency feature in the supplied spectrum.
struct NoWindowFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace geit
