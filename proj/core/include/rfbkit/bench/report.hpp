#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rfbkit/bench/benchmark.hpp"

namespace rfbkit::bench {

enum class ReportFormat { Text, Csv };

// Text: one column per encoding, six metric rows. CSV: one row per run in
// the accelerator's metrics schema. ConsistencyError if a stored ratio is
// more than 0.005 away from captured / compressed.
std::string render_report(const BenchmarkReport& report, ReportFormat format);

// Inverse of the CSV rendering.
std::vector<SessionMetrics> parse_metrics_csv(std::string_view csv);

// Verdicts: ratio ordering zlib > hextile > raw, updates per second
// non-decreasing with ratio, raw ratio exactly 1. PreconditionError with
// fewer than two encodings.
std::vector<Verdict> compare_encodings(const std::vector<EncodingSummary>& aggregate);
std::vector<Verdict> compare_encodings(const BenchmarkReport& report);

}  // namespace rfbkit::bench
