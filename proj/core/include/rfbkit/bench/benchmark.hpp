#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rfbkit/accel/link.hpp"
#include "rfbkit/model/encoding.hpp"
#include "rfbkit/model/metrics.hpp"
#include "rfbkit/server/scenario.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::bench {

struct BenchmarkPlan {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;  // overrides the scenario file
  std::vector<Encoding> encodings;
  accel::LinkConfig link;
  int repetitions = 1;
  std::filesystem::path output;  // CSV; empty: not written
  bool realtime = false;
  // External server instead of an in-process one.
  std::optional<wire::Endpoint> server;
  double drain_timeout_s = 120.0;

  // ConfigError on an empty encoding list, repetitions < 1, CopyRect as a
  // target or a bad link.
  void validate() const;
};

struct BenchmarkRow {
  Encoding encoding = Encoding::Raw;
  int repetition = 0;
  SessionMetrics metrics;
};

struct BenchmarkFailure {
  Encoding encoding = Encoding::Raw;
  int repetition = 0;
  std::string reason;
};

// Per-encoding means over the successful repetitions.
struct EncodingSummary {
  Encoding encoding = Encoding::Raw;
  int runs = 0;
  double updates = 0;
  double duration_s = 0;
  double updates_per_second = 0;
  double rectangles = 0;
  double captured_bytes = 0;
  double compressed_bytes = 0;
  double compression_ratio = 1.0;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::vector<BenchmarkFailure> failures;
  std::vector<EncodingSummary> aggregate;
  std::vector<Verdict> verdicts;

  bool ok() const;
};

struct RunResult {
  std::optional<SessionMetrics> metrics;
  std::string failure;
};

// One fresh server -> accelerator -> viewer session over in-memory pipes
// (or against plan.server), replayed to the end of the scenario. Fails if
// the viewer's final framebuffer differs from the server's.
RunResult run_session(const server::Scenario& scenario, Encoding encoding, const BenchmarkPlan& plan);

// Runs every encoding plan.repetitions times, aggregates, compares, and
// writes plan.output when set.
BenchmarkReport run_benchmark(const BenchmarkPlan& plan);

// Means per encoding, in the order encodings first appear.
std::vector<EncodingSummary> aggregate_rows(const std::vector<BenchmarkRow>& rows);

}  // namespace rfbkit::bench
