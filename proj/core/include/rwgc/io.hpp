#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "rwgc/metrics.hpp"
#include "rwgc/rwg.hpp"
#include "rwgc/stats.hpp"

namespace rwgc {

// Shortest round-trip decimal form (std::to_chars); byte-stable and parses
// back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view s);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);
std::string sha256_file(const std::filesystem::path& path);

// Matrix CSV: header `policy_index,episode_index,return`, 0-based indices,
// one row per cell in policy-major order. The config echo travels in a
// sidecar JSON next to the matrix.
std::string return_matrix_to_csv(const ReturnMatrix& matrix);
ReturnMatrix return_matrix_from_csv(const std::string& csv_text);
void write_return_matrix(const std::filesystem::path& csv_path, const ReturnMatrix& matrix);
ReturnMatrix read_return_matrix(const std::filesystem::path& csv_path);
std::filesystem::path matrix_sidecar_path(const std::filesystem::path& csv_path);

// Aggregate CSV: `policy_index,mean,variance,rank`.
std::string aggregate_to_csv(const AggregateStats& stats);

std::string histogram_to_csv(const DistributionArtifacts& art);
std::string curve_to_csv(const DistributionArtifacts& art);
std::string scatter_to_csv(const DistributionArtifacts& art);
std::string cloud_to_csv(const DistributionArtifacts& art);

// Cross-task tables.
struct MetricTableRow {
  std::string task;
  BootstrapResult pic;
  BootstrapResult poic;
};
std::string metric_table_to_csv(std::span<const MetricTableRow> rows);

// Long-form Welch matrix: `task_a,task_b,metric,t,df,p`.
struct WelchTableRow {
  std::string metric;
  PairwiseCell cell;
};
std::string welch_table_to_csv(std::span<const WelchTableRow> rows);

std::string score_scatter_to_csv(const ScoreScatterTable& table);

}  // namespace rwgc
