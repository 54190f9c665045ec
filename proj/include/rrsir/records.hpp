// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_RECORDS_HPP_
#define RRSIR_RECORDS_HPP_

#include <string>
#include <vector>

#include "rrsir/mc_harness.hpp"

namespace rrsir {

inline constexpr int kSchemaVersion = 1;

/// Line-oriented run record: first line the config echo (with schema_version),
/// one line per trial sorted by trial index, final line the summary.  All
/// numbers are serialized with shortest round-trip precision and no locale
/// dependence.
std::string serialize_run(const ExperimentResult& result);

struct RunRecord {
    int schema_version = 0;
    ExperimentConfig config;
    std::vector<double> values;
    TrialSummary summary;
    CltPrediction prediction;
};

/// Parses a serialized run; throws std::runtime_error on malformed input.
RunRecord parse_run(const std::string& text);

/// Parses an experiment config from JSON text.  Unknown keys are errors.
ExperimentConfig parse_config(const std::string& json_text);

std::string config_to_json(const ExperimentConfig& cfg);

/// Histogram export: CSV with one "lower_edge,upper_edge,count" row per bin.
std::string histogram_csv(const std::vector<double>& values, int bins);

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double x);

}  // namespace rrsir

#endif  // RRSIR_RECORDS_HPP_
