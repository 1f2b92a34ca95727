#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "anticoord/errors.hpp"
#include "anticoord/records.hpp"

using namespace anticoord;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("value formatting") {
  CHECK(format_value(0.5) == "0.5");
  CHECK(format_value(1.0 / 3.0) == "0.333333333");
  CHECK(format_value(123456789012.0) == "1.23456789e+11");
  CHECK(format_value(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_value(std::nan("")) == "nan");
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("{\"k\":1}") == "\"{\"\"k\"\":1}\"");
}

TEST_CASE("empty record set writes the header only") {
  const auto text = to_csv({});
  CHECK(text == "scenario_id,run,seed,param_json,metric,value\n");
}

TEST_CASE("rows are sorted by scenario, run and metric") {
  std::vector<MetricRecord> records = {
      {"s", 1, 7, "{}", "throughput", 0.25},
      {"s", 0, 5, "{}", "throughput", 0.5},
      {"s", 0, 5, "{}", "jain_allocation", 1.0},
      {"a", 3, 9, "{}", "converged_flag", 1.0},
  };
  const auto text = to_csv(records);
  CHECK(count_lines(text) == 5);
  CHECK(text ==
        "scenario_id,run,seed,param_json,metric,value\n"
        "a,3,9,{},converged_flag,1\n"
        "s,0,5,{},jain_allocation,1\n"
        "s,0,5,{},throughput,0.5\n"
        "s,1,7,{},throughput,0.25\n");
}

TEST_CASE("two records of one scenario give three lines") {
  std::vector<MetricRecord> records = {{"s", 0, 1, "{}", "throughput", 1.0},
                                       {"s", 1, 2, "{}", "throughput", 1.0}};
  CHECK(count_lines(to_csv(records)) == 3);
}

TEST_CASE("unknown metric names are rejected") {
  std::vector<MetricRecord> records = {{"s", 0, 1, "{}", "speed", 1.0}};
  CHECK_THROWS_AS(to_csv(records), ContractViolation);
  CHECK(is_registered_metric("group_fairness"));
  CHECK_FALSE(is_registered_metric("speed"));
}

TEST_CASE("writing to files") {
  const auto dir = std::filesystem::temp_directory_path() / "anticoord_records_test";
  std::filesystem::create_directories(dir);
  std::vector<MetricRecord> records = {{"s", 0, 1, "{\"a\":1}", "throughput", 0.75}};
  write_csv(records, dir / "data.csv");
  const auto text = slurp(dir / "data.csv");
  CHECK(text == to_csv(records));
  CHECK(text.find('\r') == std::string::npos);
  CHECK_THROWS_AS(write_csv(records, dir / "missing" / "data.csv"), IoError);
  try {
    write_csv(records, dir / "missing" / "data.csv");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("summaries") {
  std::vector<MetricRecord> records;
  for (std::size_t r = 0; r < 128; ++r) records.push_back({"s", r, r, "{}", "throughput", 0.4});
  records.push_back({"t", 0, 0, "{}", "throughput", 0.9});
  records.push_back({"s", 0, 0, "{\"x\":2}", "throughput", 0.1});
  records.push_back({"s", 1, 0, "{\"x\":2}", "throughput", 0.3});

  const auto rows = summarize(records);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].n == 128);
  CHECK(rows[0].mean == 0.4);
  CHECK(*rows[0].ci_halfwidth == 0.0);
  CHECK(rows[1].param_json == "{\"x\":2}");
  CHECK(rows[1].mean == doctest::Approx(0.2));
  CHECK_FALSE(rows[2].ci_halfwidth.has_value());

  const auto text = summary_to_csv(rows);
  CHECK(text.rfind("scenario_id,param_json,metric,n,mean,ci_halfwidth\n", 0) == 0);
  CHECK(text.find("t,{},throughput,1,0.9,NA\n") != std::string::npos);

  const auto pooled = summarize(records, {false, false});
  REQUIRE(pooled.size() == 1);
  CHECK(pooled[0].n == 131);
}
