#pragma once

#include <optional>
#include <string>

#include "rwgc/errorbound.hpp"
#include "rwgc/metrics.hpp"
#include "rwgc/report.hpp"
#include "rwgc/rwg.hpp"
#include "rwgc/stats.hpp"

namespace rwgc {

// JSON forms of the config and report types. Field sets and ordering are
// fixed so reruns produce byte-identical documents; parse(serialize(x))
// reproduces x exactly.

std::string to_json_string(const PolicySpec& spec, int indent = 2);
std::string to_json_string(const ArmTask& task, int indent = 2);
std::string to_json_string(const RwgConfig& config, int indent = 2);
std::string to_json_string(const MetricReport& report, int indent = 2);
std::string to_json_string(const BootstrapResult& result, int indent = 2);
std::string to_json_string(const BoundReport& report, int indent = 2);

PolicySpec policy_spec_from_json(const std::string& text);
ArmTask arm_task_from_json(const std::string& text);
RwgConfig rwg_config_from_json(const std::string& text);
BootstrapResult bootstrap_result_from_json(const std::string& text);

ExperimentConfig experiment_config_from_json(
    const std::string& text, const std::string& profile = "",
    std::optional<std::uint64_t> seed_override = {});
std::string to_json_string(const ExperimentConfig& config, int indent = 2);

std::string manifest_to_json(const SuiteManifest& manifest, int indent = 2);

}  // namespace rwgc
