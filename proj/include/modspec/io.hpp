#pragma once

#include <string>

#include <json.hpp>

#include "modspec/bounds.hpp"
#include "modspec/estimator.hpp"
#include "modspec/experiments.hpp"
#include "modspec/signal.hpp"

namespace modspec {

inline constexpr const char* kToolVersion = "0.1.0";

/// Formats a double with 17 significant digits (lossless round trip).
std::string format_full(double value);

/// FNV-1a hash of a canonical JSON dump; used as the provenance config hash.
std::string config_hash(const nlohmann::json& j);

nlohmann::json to_json(const SoSParams& params);
SoSParams sos_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SamplingConfig& config);
SamplingConfig sampling_config_from_json(const nlohmann::json& j);

/// JSON envelope: provenance + config + truth (if any) + samples.
nlohmann::json to_json(const FoldedTrace& trace);
FoldedTrace folded_trace_from_json(const nlohmann::json& j);

/// CSV with '#' provenance comment lines, then "n,y_w" header and rows.
std::string trace_to_csv(const FoldedTrace& trace);
/// Parses the sample column of a trace CSV (provenance lines ignored).
std::vector<double> trace_samples_from_csv(const std::string& csv);

nlohmann::json to_json(const CrbReport& report);
std::string crb_csv_row(const CrbReport& report);

nlohmann::json to_json(const EstimateResult& result);

nlohmann::json to_json(const SweepConfig& config);
SweepConfig sweep_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepResult& result);
std::string sweep_to_csv(const SweepResult& result);

}  // namespace modspec
