// experiments.hpp - batch experiment driver: named studies over the
// configuration space with machine-readable CSV/JSON results
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cotx/params.hpp"

namespace cotx {

enum class ExperimentName {
    equivalence, // block engine vs ideal cascade: waveform error and Q legs
    ccdf,        // PAPR exceedance curves for a clipping-ratio list
    cr_sweep,    // Q vs clipping ratio at the configured OSNR/roll-off
    osnr_sweep,  // Q vs OSNR, unclipped chain
    complexity,  // multiplication counts per block size
    single_run,  // one full link at the configured point
};

ExperimentName experiment_from_name(const std::string& name);

enum class OutputFormat { csv, json };

struct ExperimentSpec {
    ExperimentName name = ExperimentName::single_run;
    SystemConfig config;
    std::string sweep_axis;       // parameter the value list applies to
    std::vector<double> sweep_values;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
};

struct ExperimentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantFailure : ExperimentError {
    using ExperimentError::ExperimentError;
};
struct IoError : ExperimentError {
    using ExperimentError::ExperimentError;
};

// Runs the experiment and writes one result file embedding the full resolved
// configuration. Identical spec + seed produce byte-identical files.
// Throws ConfigError / InvariantFailure / IoError.
void run_experiment(const ExperimentSpec& spec);

enum class PrbsMode { prng, lfsr23 };

// prng: uniform bits from the labeled substream "prbs".
// lfsr23: x^23 + x^18 + 1 Fibonacci LFSR seeded with a nonzero state.
std::vector<std::uint8_t> generate_prbs(std::size_t length, std::uint64_t seed, PrbsMode mode);

// One LFSR state step; exposed so the period property is testable.
std::uint32_t lfsr23_step(std::uint32_t state);

} // namespace cotx
