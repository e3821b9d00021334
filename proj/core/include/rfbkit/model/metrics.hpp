#pragma once

#include <cstdint>
#include <string>

namespace rfbkit {

// Per-session transfer statistics.
struct SessionMetrics {
  std::string encoding;
  std::uint64_t updates = 0;
  double duration_s = 0.0;
  double updates_per_second = 0.0;
  std::uint64_t rectangles = 0;
  // Decoded raw-equivalent bytes: sum of w*h*bytes_per_pixel.
  std::uint64_t captured_bytes = 0;
  // Encoded payload bytes on the wire, rectangle headers excluded.
  std::uint64_t compressed_bytes = 0;
  double compression_ratio = 1.0;

  // Derives the rate and ratio from the counts.
  static SessionMetrics from_counts(std::string encoding, std::uint64_t updates, double duration_s,
                                    std::uint64_t rectangles, std::uint64_t captured_bytes,
                                    std::uint64_t compressed_bytes);

  // Throws ConsistencyError if the stored rate or ratio differ from the
  // values recomputed from the counts by more than `tolerance`.
  void check_consistency(double tolerance = 1e-9) const;

  bool operator==(const SessionMetrics&) const = default;
};

double ratio_of(std::uint64_t captured_bytes, std::uint64_t compressed_bytes);
double rate_of(std::uint64_t updates, double duration_s);

}  // namespace rfbkit
