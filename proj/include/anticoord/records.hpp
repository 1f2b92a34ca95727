#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anticoord {

inline constexpr std::array<std::string_view, 7> kMetricNames = {
    "convergence_steps", "converged_flag",      "group_fairness", "jain_allocation",
    "jain_binomial",     "max_internal_regret", "throughput",
};

bool is_registered_metric(std::string_view name);

struct MetricRecord {
  std::string scenario_id;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::string param_json;  // canonical, key-sorted
  std::string metric;
  double value = 0.0;
};

// 9 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_value(double value);

// RFC 4180 quoting when the field holds a comma, quote or newline.
std::string csv_field(std::string_view field);

inline constexpr std::string_view kDataHeader = "scenario_id,run,seed,param_json,metric,value";
inline constexpr std::string_view kSummaryHeader = "scenario_id,param_json,metric,n,mean,ci_halfwidth";

// Rows sorted by (scenario_id, run, metric); ties keep their input order.
std::string to_csv(std::span<const MetricRecord> records);

// Throws IoError naming the path on failure.
void write_csv(std::span<const MetricRecord> records, const std::filesystem::path& destination);

struct SummaryRow {
  std::string scenario_id;
  std::string param_json;
  std::string metric;
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> ci_halfwidth;  // empty for single-sample groups
};

struct GroupBy {
  bool scenario_id = true;
  bool param_json = true;
};

// Groups records (always by metric, plus the selected keys) and reports mean
// and 95% half-width per group, in first-appearance order of sorted records.
std::vector<SummaryRow> summarize(std::span<const MetricRecord> records, GroupBy keys = {});

std::string summary_to_csv(std::span<const SummaryRow> rows);
void write_summary_csv(std::span<const SummaryRow> rows, const std::filesystem::path& destination);

// Writes `text` byte-for-byte (no newline translation).
void write_text_file(const std::filesystem::path& destination, std::string_view text);

}  // namespace anticoord
