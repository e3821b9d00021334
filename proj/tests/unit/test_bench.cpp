#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rfbkit/accel/metrics_tap.hpp"
#include "rfbkit/bench/benchmark.hpp"
#include "rfbkit/bench/report.hpp"
#include "rfbkit/model/error.hpp"

using namespace rfbkit;
using namespace rfbkit::bench;

namespace {

const std::string kScenarioDir = RFBKIT_SCENARIO_DIR;

EncodingSummary summary(Encoding e, double updates, double ups, double rects, double captured_mb,
                        double compressed_mb, double ratio) {
  EncodingSummary s;
  s.encoding = e;
  s.runs = 1;
  s.updates = updates;
  s.updates_per_second = ups;
  s.duration_s = updates / ups;
  s.rectangles = rects;
  s.captured_bytes = captured_mb * 1e6;
  s.compressed_bytes = compressed_mb * 1e6;
  s.compression_ratio = ratio;
  return s;
}

// The published results table.
std::vector<EncodingSummary> published() {
  return {summary(Encoding::Raw, 8, 0.32, 8, 10.10, 10.10, 1.0),
          summary(Encoding::Hextile, 20, 0.82, 22, 26.53, 5.64, 4.70),
          summary(Encoding::Zlib, 68, 1.65, 808, 91.70, 8.90, 10.30)};
}

BenchmarkRow row(Encoding e, int rep, std::uint64_t updates, double duration, std::uint64_t captured,
                 std::uint64_t compressed) {
  return {e, rep,
          SessionMetrics::from_counts(std::string(encoding_name(e)), updates, duration, updates * 2,
                                      captured, compressed)};
}

std::filesystem::path short_scenario() {
  const auto p = std::filesystem::temp_directory_path() / "rfbkit_bench_short.json";
  std::ofstream(p) << R"({"seed": 5, "width": 160, "height": 256, "steps": [
    {"kind": "home", "seconds": 0.3},
    {"kind": "open_app", "app": "browser", "seconds": 0.5},
    {"kind": "open_app", "app": "music_player", "seconds": 0.5},
    {"kind": "end"}]})";
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("published results pass every verdict") {
  const auto verdicts = compare_encodings(published());
  REQUIRE(verdicts.size() == 3);
  for (const auto& v : verdicts) {
    CAPTURE(v.name);
    CHECK(v.pass);
  }
}

TEST_CASE("raw ratio above one fails its verdict") {
  auto agg = published();
  agg[0].compression_ratio = 1.02;
  bool found = false;
  for (const auto& v : compare_encodings(agg)) {
    if (v.name == "raw ratio = 1") {
      found = true;
      CHECK_FALSE(v.pass);
    }
  }
  CHECK(found);
}

TEST_CASE("verdicts catch reversed orderings") {
  auto agg = published();
  std::swap(agg[1].compression_ratio, agg[2].compression_ratio);
  CHECK_FALSE(compare_encodings(agg)[0].pass);

  agg = published();
  agg[2].updates_per_second = 0.5;
  CHECK_FALSE(compare_encodings(agg)[1].pass);
}

TEST_CASE("comparison needs two encodings") {
  CHECK_THROWS_AS(compare_encodings(std::vector<EncodingSummary>{published()[0]}), PreconditionError);
  CHECK_THROWS_AS(compare_encodings(std::vector<EncodingSummary>{}), PreconditionError);
}

TEST_CASE("text report mirrors the results table") {
  BenchmarkReport report;
  report.rows = {row(Encoding::Raw, 0, 8, 25.0, 10'100'000, 10'100'000),
                 row(Encoding::Hextile, 0, 20, 24.39, 26'530'000, 5'640'000)};
  report.aggregate = aggregate_rows(report.rows);
  report.verdicts = compare_encodings(report.aggregate);
  const auto text = render_report(report, ReportFormat::Text);
  for (const char* label : {"Updates", "Updates/second", "Rectangles received", "Data captured (MB)",
                            "Data compressed (MB)", "Compression ratio"}) {
    CAPTURE(label);
    CHECK(text.find(label) != std::string::npos);
  }
  const auto ratio_line = text.substr(text.find("Compression ratio"));
  CHECK(ratio_line.find("1.00") != std::string::npos);
  CHECK(ratio_line.find("4.70") != std::string::npos);
  CHECK(text.find("26.53") != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
}

TEST_CASE("render checks stored ratios") {
  BenchmarkReport report;
  report.rows = {row(Encoding::Hextile, 0, 20, 24.0, 26'530'000, 5'640'000)};
  report.rows[0].metrics.compression_ratio = 4.704;  // recomputed 4.7039
  CHECK_NOTHROW(render_report(report, ReportFormat::Csv));
  report.rows[0].metrics.compression_ratio = 4.71;
  CHECK_THROWS_AS(render_report(report, ReportFormat::Csv), ConsistencyError);
  CHECK_THROWS_AS(render_report(report, ReportFormat::Text), ConsistencyError);
}

TEST_CASE("csv rendering") {
  BenchmarkReport empty;
  CHECK(render_report(empty, ReportFormat::Csv) == accel::metrics_csv_header() + "\n");
  CHECK(parse_metrics_csv(render_report(empty, ReportFormat::Csv)).empty());

  BenchmarkReport report;
  report.rows = {row(Encoding::Raw, 0, 17, 9.87654, 1'536'000, 1'536'000),
                 row(Encoding::Zlib, 0, 55, 10.1, 44'000'000, 1'234'567)};
  const auto parsed = parse_metrics_csv(render_report(report, ReportFormat::Csv));
  REQUIRE(parsed.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& a = report.rows[i].metrics;
    const auto& b = parsed[i];
    CHECK(b.encoding == a.encoding);
    CHECK(b.updates == a.updates);
    CHECK(b.rectangles == a.rectangles);
    CHECK(b.captured_bytes == a.captured_bytes);
    CHECK(b.compressed_bytes == a.compressed_bytes);
    CHECK(std::abs(b.duration_s - a.duration_s) <= 5e-4);
    CHECK(std::abs(b.updates_per_second - a.updates_per_second) <= 5e-5);
    CHECK(std::abs(b.compression_ratio - a.compression_ratio) <= 5e-5);
  }
  CHECK_THROWS_AS(parse_metrics_csv("bogus\n"), FramingError);
  CHECK_THROWS_AS(parse_metrics_csv(accel::metrics_csv_header() + "\nraw,1,2\n"), FramingError);
}

TEST_CASE("plan validation") {
  BenchmarkPlan plan;
  plan.scenario = kScenarioDir + "/reference.json";
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan.encodings = {Encoding::Raw};
  CHECK_NOTHROW(plan.validate());
  plan.repetitions = 0;
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan.repetitions = 1;
  plan.encodings = {Encoding::CopyRect};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
}

TEST_CASE("reference run orders the encodings") {
  BenchmarkPlan plan;
  plan.scenario = kScenarioDir + "/reference.json";
  plan.seed = 42;
  plan.encodings = {Encoding::Raw, Encoding::Hextile, Encoding::Zlib};
  const auto report = run_benchmark(plan);
  REQUIRE(report.failures.empty());
  REQUIRE(report.rows.size() == 3);
  const double raw = report.rows[0].metrics.compression_ratio;
  const double hextile = report.rows[1].metrics.compression_ratio;
  const double zlib = report.rows[2].metrics.compression_ratio;
  CHECK(raw == 1.0);
  CHECK(raw < hextile);
  CHECK(hextile < zlib);
  CHECK(report.ok());
}

TEST_CASE("repetitions are deterministic") {
  BenchmarkPlan plan;
  plan.scenario = short_scenario();
  plan.encodings = {Encoding::RRE, Encoding::Zlib};
  plan.repetitions = 2;
  plan.output = std::filesystem::temp_directory_path() / "rfbkit_bench_det.csv";
  const auto report = run_benchmark(plan);
  REQUIRE(report.failures.empty());
  REQUIRE(report.rows.size() == 4);
  CHECK(report.rows[0].metrics == report.rows[1].metrics);
  CHECK(report.rows[2].metrics == report.rows[3].metrics);
  const auto first = slurp(plan.output);
  run_benchmark(plan);
  CHECK(slurp(plan.output) == first);
  std::filesystem::remove(plan.output);
  std::filesystem::remove(plan.scenario);
}

TEST_CASE("unreachable server gives a failed report") {
  BenchmarkPlan plan;
  plan.scenario = kScenarioDir + "/reference.json";
  plan.encodings = {Encoding::Raw, Encoding::Zlib};
  plan.server = wire::Endpoint{"127.0.0.1", 1};
  plan.output = std::filesystem::temp_directory_path() / "rfbkit_bench_unreachable.csv";
  const auto report = run_benchmark(plan);
  CHECK(report.rows.empty());
  CHECK(report.failures.size() == 2);
  CHECK_FALSE(report.ok());
  CHECK(slurp(plan.output) == accel::metrics_csv_header() + "\n");
  std::filesystem::remove(plan.output);
}
