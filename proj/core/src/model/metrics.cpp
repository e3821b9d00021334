#include "rfbkit/model/metrics.hpp"

#include <cmath>
#include <sstream>

#include "rfbkit/model/error.hpp"

namespace rfbkit {

double ratio_of(std::uint64_t captured_bytes, std::uint64_t compressed_bytes) {
  if (compressed_bytes == 0) return 1.0;
  return static_cast<double>(captured_bytes) / static_cast<double>(compressed_bytes);
}

double rate_of(std::uint64_t updates, double duration_s) {
  return duration_s > 0 ? static_cast<double>(updates) / duration_s : 0.0;
}

SessionMetrics SessionMetrics::from_counts(std::string encoding, std::uint64_t updates,
                                           double duration_s, std::uint64_t rectangles,
                                           std::uint64_t captured_bytes,
                                           std::uint64_t compressed_bytes) {
  SessionMetrics m;
  m.encoding = std::move(encoding);
  m.updates = updates;
  m.duration_s = duration_s;
  m.updates_per_second = rate_of(updates, duration_s);
  m.rectangles = rectangles;
  m.captured_bytes = captured_bytes;
  m.compressed_bytes = compressed_bytes;
  m.compression_ratio = ratio_of(captured_bytes, compressed_bytes);
  return m;
}

void SessionMetrics::check_consistency(double tolerance) const {
  const double ratio = ratio_of(captured_bytes, compressed_bytes);
  if (std::abs(ratio - compression_ratio) > tolerance * std::max(1.0, std::abs(ratio))) {
    std::ostringstream os;
    os << encoding << ": stored compression ratio " << compression_ratio
       << " does not match captured/compressed " << ratio;
    throw ConsistencyError(os.str());
  }
  const double rate = rate_of(updates, duration_s);
  if (std::abs(rate - updates_per_second) > tolerance * std::max(1.0, std::abs(rate))) {
    std::ostringstream os;
    os << encoding << ": stored updates/second " << updates_per_second
       << " does not match updates/duration " << rate;
    throw ConsistencyError(os.str());
  }
}

}  // namespace rfbkit
