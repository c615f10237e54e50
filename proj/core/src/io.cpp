#include "rwgc/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rwgc/sha256.hpp"

namespace rwgc {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad float field: '" + std::string(s) + "'");
  return v;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex_digest();
}

std::string return_matrix_to_csv(const ReturnMatrix& matrix) {
  std::string out = "policy_index,episode_index,return\n";
  out.reserve(out.size() + static_cast<std::size_t>(matrix.policies) *
                               static_cast<std::size_t>(matrix.episodes) * 24);
  for (int n = 0; n < matrix.policies; ++n) {
    for (int e = 0; e < matrix.episodes; ++e) {
      out += std::to_string(n);
      out += ',';
      out += std::to_string(e);
      out += ',';
      out += format_double(matrix.at(n, e));
      out += '\n';
    }
  }
  return out;
}

namespace {

std::string_view next_line(std::string_view& rest) {
  const auto pos = rest.find('\n');
  std::string_view line = rest.substr(0, pos);
  rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos + 1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

long long parse_ll(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad integer field: '" + std::string(s) + "'");
  return v;
}

}  // namespace

ReturnMatrix return_matrix_from_csv(const std::string& csv_text) {
  std::string_view rest = csv_text;
  const std::string_view header = next_line(rest);
  if (header != "policy_index,episode_index,return")
    throw std::invalid_argument("matrix csv: unexpected header");

  struct Cell {
    long long n, e;
    double v;
  };
  std::vector<Cell> cells;
  long long max_n = -1, max_e = -1;
  while (!rest.empty()) {
    const std::string_view line = next_line(rest);
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw std::invalid_argument("matrix csv: malformed row");
    Cell cell{parse_ll(line.substr(0, c1)), parse_ll(line.substr(c1 + 1, c2 - c1 - 1)),
              parse_double(line.substr(c2 + 1))};
    max_n = std::max(max_n, cell.n);
    max_e = std::max(max_e, cell.e);
    cells.push_back(cell);
  }
  if (cells.empty()) throw std::invalid_argument("matrix csv: no data rows");

  ReturnMatrix matrix;
  matrix.policies = static_cast<int>(max_n + 1);
  matrix.episodes = static_cast<int>(max_e + 1);
  const std::size_t expected =
      static_cast<std::size_t>(matrix.policies) * static_cast<std::size_t>(matrix.episodes);
  if (cells.size() != expected)
    throw std::invalid_argument("matrix csv: cell count does not match the shape");
  matrix.values.resize(expected);
  for (const Cell& c : cells)
    matrix.values[static_cast<std::size_t>(c.n) * matrix.episodes +
                  static_cast<std::size_t>(c.e)] = c.v;
  return matrix;
}

std::filesystem::path matrix_sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".config.json");
  return p;
}

void write_return_matrix(const std::filesystem::path& csv_path, const ReturnMatrix& matrix) {
  write_text_file(csv_path, return_matrix_to_csv(matrix));
  if (!matrix.config_json.empty())
    write_text_file(matrix_sidecar_path(csv_path), matrix.config_json);
}

ReturnMatrix read_return_matrix(const std::filesystem::path& csv_path) {
  ReturnMatrix matrix = return_matrix_from_csv(read_text_file(csv_path));
  const auto sidecar = matrix_sidecar_path(csv_path);
  if (std::filesystem::exists(sidecar)) matrix.config_json = read_text_file(sidecar);
  return matrix;
}

std::string aggregate_to_csv(const AggregateStats& stats) {
  std::string out = "policy_index,mean,variance,rank\n";
  for (std::size_t n = 0; n < stats.mean.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(stats.mean[n]);
    out += ',';
    out += format_double(stats.variance[n]);
    out += ',';
    out += std::to_string(stats.rank[n]);
    out += '\n';
  }
  return out;
}

std::string histogram_to_csv(const DistributionArtifacts& art) {
  std::string out = "bin_index,bin_low,bin_high,count\n";
  for (const auto& b : art.histogram) {
    out += std::to_string(b.index);
    out += ',';
    out += format_double(b.lo);
    out += ',';
    out += format_double(b.hi);
    out += ',';
    out += std::to_string(b.count);
    out += '\n';
  }
  return out;
}

std::string curve_to_csv(const DistributionArtifacts& art) {
  std::string out = "rank,policy_index,mean_scaled\n";
  for (const auto& c : art.curve) {
    out += std::to_string(c.rank);
    out += ',';
    out += std::to_string(c.policy_index);
    out += ',';
    out += format_double(c.mean_scaled);
    out += '\n';
  }
  return out;
}

std::string scatter_to_csv(const DistributionArtifacts& art) {
  std::string out = "rank,policy_index,episode_index,return_scaled\n";
  out.reserve(out.size() + art.scatter.size() * 24);
  for (const auto& s : art.scatter) {
    out += std::to_string(s.rank);
    out += ',';
    out += std::to_string(s.policy_index);
    out += ',';
    out += std::to_string(s.episode_index);
    out += ',';
    out += format_double(s.return_scaled);
    out += '\n';
  }
  return out;
}

std::string cloud_to_csv(const DistributionArtifacts& art) {
  std::string out = "policy_index,mean_scaled,stddev_scaled\n";
  for (const auto& c : art.cloud) {
    out += std::to_string(c.policy_index);
    out += ',';
    out += format_double(c.mean_scaled);
    out += ',';
    out += format_double(c.stddev_scaled);
    out += '\n';
  }
  return out;
}

std::string metric_table_to_csv(std::span<const MetricTableRow> rows) {
  std::string out =
      "task,pic,pic_std,pic_ci_low,pic_ci_high,poic,poic_std,poic_ci_low,poic_ci_high\n";
  for (const auto& r : rows) {
    out += r.task;
    out += ',';
    out += format_double(r.pic.point);
    out += ',';
    out += format_double(r.pic.stddev);
    out += ',';
    out += format_double(r.pic.ci_low);
    out += ',';
    out += format_double(r.pic.ci_high);
    out += ',';
    out += format_double(r.poic.point);
    out += ',';
    out += format_double(r.poic.stddev);
    out += ',';
    out += format_double(r.poic.ci_low);
    out += ',';
    out += format_double(r.poic.ci_high);
    out += '\n';
  }
  return out;
}

std::string welch_table_to_csv(std::span<const WelchTableRow> rows) {
  std::string out = "task_a,task_b,metric,t,df,p\n";
  for (const auto& r : rows) {
    out += r.cell.task_a;
    out += ',';
    out += r.cell.task_b;
    out += ',';
    out += r.metric;
    out += ',';
    out += format_double(r.cell.welch.t);
    out += ',';
    out += format_double(r.cell.welch.df);
    out += ',';
    out += format_double(r.cell.welch.p);
    out += '\n';
  }
  return out;
}

std::string score_scatter_to_csv(const ScoreScatterTable& table) {
  std::string out =
      "task,score_mean,pic,poic,h_r,h_r_given_theta,h_o,h_o_given_theta,return_variance\n";
  for (const auto& r : table.rows) {
    out += r.task;
    out += ',';
    out += format_double(r.score_mean);
    out += ',';
    out += format_double(r.pic);
    out += ',';
    out += format_double(r.poic);
    out += ',';
    out += format_double(r.h_r);
    out += ',';
    out += format_double(r.h_r_given_theta);
    out += ',';
    out += format_double(r.h_o);
    out += ',';
    out += format_double(r.h_o_given_theta);
    out += ',';
    out += format_double(r.return_variance);
    out += '\n';
  }
  out += "# pearson correlations of score_mean vs columns\n";
  out += "column,r\n";
  for (const auto& c : table.correlations) {
    out += c.column;
    out += ',';
    out += format_double(c.r);
    out += '\n';
  }
  return out;
}

}  // namespace rwgc
