#include "anticoord/records.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <tuple>

#include "anticoord/errors.hpp"
#include "anticoord/metrics.hpp"

namespace anticoord {

bool is_registered_metric(std::string_view name) {
  return std::find(kMetricNames.begin(), kMetricNames.end(), name) != kMetricNames.end();
}

std::string format_value(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

namespace {

std::vector<const MetricRecord*> sorted_view(std::span<const MetricRecord> records) {
  std::vector<const MetricRecord*> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const MetricRecord* a, const MetricRecord* b) {
    return std::tie(a->scenario_id, a->run, a->metric) < std::tie(b->scenario_id, b->run, b->metric);
  });
  return rows;
}

}  // namespace

std::string to_csv(std::span<const MetricRecord> records) {
  std::string out(kDataHeader);
  out += '\n';
  for (const MetricRecord* r : sorted_view(records)) {
    if (!is_registered_metric(r->metric)) {
      throw ContractViolation("metric '" + r->metric + "' is not in the registry");
    }
    out += csv_field(r->scenario_id);
    out += ',';
    out += std::to_string(r->run);
    out += ',';
    out += std::to_string(r->seed);
    out += ',';
    out += csv_field(r->param_json);
    out += ',';
    out += csv_field(r->metric);
    out += ',';
    out += format_value(r->value);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& destination, std::string_view text) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + destination.string() + " for writing: " + std::strerror(errno));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + destination.string());
}

void write_csv(std::span<const MetricRecord> records, const std::filesystem::path& destination) {
  write_text_file(destination, to_csv(records));
}

std::vector<SummaryRow> summarize(std::span<const MetricRecord> records, GroupBy keys) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::size_t> slot;
  std::vector<Key> order;
  std::vector<std::vector<double>> values;
  for (const MetricRecord* r : sorted_view(records)) {
    Key key{keys.scenario_id ? r->scenario_id : std::string(),
            keys.param_json ? r->param_json : std::string(), r->metric};
    auto [it, inserted] = slot.try_emplace(key, order.size());
    if (inserted) {
      order.push_back(key);
      values.emplace_back();
    }
    values[it->second].push_back(r->value);
  }

  std::vector<SummaryRow> rows;
  rows.reserve(order.size());
  for (std::size_t g = 0; g < order.size(); ++g) {
    SummaryRow row{std::get<0>(order[g]), std::get<1>(order[g]), std::get<2>(order[g]),
                   values[g].size(), 0.0, std::nullopt};
    if (values[g].size() >= 2) {
      const Interval ci = confidence_interval(values[g]);
      row.mean = ci.mean;
      row.ci_halfwidth = ci.halfwidth;
    } else {
      row.mean = values[g].front();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_to_csv(std::span<const SummaryRow> rows) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += csv_field(r.scenario_id) + ',' + csv_field(r.param_json) + ',' + csv_field(r.metric) +
           ',' + std::to_string(r.n) + ',' + format_value(r.mean) + ',' +
           (r.ci_halfwidth ? format_value(*r.ci_halfwidth) : std::string("NA")) + '\n';
  }
  return out;
}

void write_summary_csv(std::span<const SummaryRow> rows, const std::filesystem::path& destination) {
  write_text_file(destination, summary_to_csv(rows));
}

}  // namespace anticoord
