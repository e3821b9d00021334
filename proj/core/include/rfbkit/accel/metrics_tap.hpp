#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "rfbkit/model/encoding.hpp"
#include "rfbkit/model/metrics.hpp"
#include "rfbkit/model/pixel_format.hpp"

namespace rfbkit::accel {

// Counts what goes downstream. Rectangle headers are not counted, so a Raw
// session has a ratio of exactly 1.
class MetricsTap {
 public:
  void record(std::span<const RectUpdate> rects, const PixelFormat& format);

  std::uint64_t updates() const { return updates_.load(); }
  std::uint64_t rectangles() const { return rectangles_.load(); }
  std::uint64_t captured_bytes() const { return captured_.load(); }
  std::uint64_t compressed_bytes() const { return compressed_.load(); }

  SessionMetrics snapshot(std::string encoding, double duration_s) const;

 private:
  std::atomic<std::uint64_t> updates_{0};
  std::atomic<std::uint64_t> rectangles_{0};
  std::atomic<std::uint64_t> captured_{0};
  std::atomic<std::uint64_t> compressed_{0};
};

inline SessionMetrics tap_metrics(const MetricsTap& tap, std::string encoding, double duration_s) {
  return tap.snapshot(std::move(encoding), duration_s);
}

// encoding,updates,duration_s,updates_per_s,rects,captured_bytes,compressed_bytes,ratio
std::string metrics_csv_header();
std::string metrics_csv_row(const SessionMetrics& m);
// Writes the header first when the file is new or empty.
void append_metrics_csv(const std::filesystem::path& path, const SessionMetrics& m);

}  // namespace rfbkit::accel
