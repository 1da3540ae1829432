#pragma once

// Sectioned key-value run configuration: parse with line/column diagnostics,
// canonical serialization (round-trip fixed point), defaults that realize the
// standard two-point lossless setup when only the coupling keys are given.

#include <string>

#include "geit/analysis.hpp"
#include "geit/dde.hpp"
#include "geit/types.hpp"

namespace geit {

struct OutputSpec {
    std::string dir;       // output directory; empty = env GEIT_OUTPUT_DIR or "."
    std::string basename;  // output file stem; empty = per-task default
};

struct RunConfig {
    SystemParams params;
    DetuningGrid grid;
    DdeConfig dde;
    OutputSpec output;
    std::string task;  // optional default task for the `run` subcommand
};

// Parse config text; throws ParseError (malformed text) or ValidationError
// (well-formed but invalid values).
RunConfig parse_config(const std::string& text);

// Read and parse a config file.
RunConfig load_config(const std::string& path);

// Canonical text form; parse(serialize(c)) reproduces c and serialization is a
// fixed point of parse-then-serialize.
std::string serialize_config(const RunConfig& c);

}  // namespace geit
