#include "rfbkit/accel/metrics_tap.hpp"

#include <cstdio>
#include <fstream>

#include "rfbkit/model/error.hpp"

namespace rfbkit::accel {

void MetricsTap::record(std::span<const RectUpdate> rects, const PixelFormat& format) {
  std::uint64_t captured = 0;
  std::uint64_t compressed = 0;
  for (const auto& r : rects) {
    captured += static_cast<std::uint64_t>(r.rect.area()) * format.bytes_per_pixel();
    compressed += r.payload.size();
  }
  rectangles_ += rects.size();
  captured_ += captured;
  compressed_ += compressed;
  ++updates_;
}

SessionMetrics MetricsTap::snapshot(std::string encoding, double duration_s) const {
  return SessionMetrics::from_counts(std::move(encoding), updates(), duration_s, rectangles(),
                                     captured_bytes(), compressed_bytes());
}

std::string metrics_csv_header() {
  return "encoding,updates,duration_s,updates_per_s,rects,captured_bytes,compressed_bytes,ratio";
}

std::string metrics_csv_row(const SessionMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%llu,%.3f,%.4f,%llu,%llu,%llu,%.4f", m.encoding.c_str(),
                static_cast<unsigned long long>(m.updates), m.duration_s, m.updates_per_second,
                static_cast<unsigned long long>(m.rectangles),
                static_cast<unsigned long long>(m.captured_bytes),
                static_cast<unsigned long long>(m.compressed_bytes), m.compression_ratio);
  return buf;
}

void append_metrics_csv(const std::filesystem::path& path, const SessionMetrics& m) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot open metrics file " + path.string());
  if (fresh) out << metrics_csv_header() << '\n';
  out << metrics_csv_row(m) << '\n';
}

}  // namespace rfbkit::accel
