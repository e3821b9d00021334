#include "rfbkit/accel/link.hpp"

#include <algorithm>
#include <cmath>

#include "rfbkit/model/error.hpp"

namespace rfbkit::accel {

void LinkConfig::validate() const {
  if (!(rate_bps > 0) || !std::isfinite(rate_bps)) throw ConfigError("link rate must be > 0");
  if (burst_bytes == 0) throw ConfigError("link burst must be > 0");
  if (!(latency_s >= 0) || !std::isfinite(latency_s)) throw ConfigError("link latency must be >= 0");
}

TokenBucket::TokenBucket(LinkConfig config, double start) : config_(config), last_(start) {
  config_.validate();
}

std::vector<Delivery> TokenBucket::schedule(double now, std::size_t n) {
  const double bytes_per_s = config_.rate_bps / 8.0;
  const double burst = static_cast<double>(config_.burst_bytes);
  std::vector<Delivery> out;
  std::size_t offset = 0;
  while (offset < n) {
    const std::size_t chunk = std::min(config_.burst_bytes, n - offset);
    const double t0 = std::max(now, last_);
    tokens_ = std::min(burst, tokens_ + (t0 - last_) * bytes_per_s);
    double sent = t0;
    if (tokens_ >= static_cast<double>(chunk)) {
      tokens_ -= static_cast<double>(chunk);
    } else {
      sent = t0 + (static_cast<double>(chunk) - tokens_) / bytes_per_s;
      tokens_ = 0.0;
    }
    last_ = sent;
    out.push_back({sent + config_.latency_s, offset, chunk});
    offset += chunk;
  }
  return out;
}

double TokenBucket::completion(double now, std::size_t n) {
  if (n == 0) return std::max(now, last_) + config_.latency_s;
  return schedule(now, n).back().time;
}

double throttle_write(TokenBucket& bucket, Clock& clock, wire::Connection& conn,
                      std::span<const std::uint8_t> bytes) {
  const double now = clock.now();
  if (bytes.empty()) {
    const double done = bucket.completion(now, 0);
    if (!clock.is_virtual()) clock.sleep_until(done);
    return done;
  }
  const auto plan = bucket.schedule(now, bytes.size());
  if (clock.is_virtual()) {
    conn.write_all(bytes);
  } else {
    for (const Delivery& d : plan) {
      clock.sleep_until(d.time);
      conn.write_all(bytes.subspan(d.offset, d.bytes));
    }
  }
  return plan.back().time;
}

ThrottledLink::ThrottledLink(LinkConfig config, Clock& clock)
    : clock_(clock), bucket_(config, clock.now()) {}

double ThrottledLink::write(wire::Connection& conn, std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(mu_);
  const double done = throttle_write(bucket_, clock_, conn, bytes);
  last_completion_ = std::max(last_completion_, done);
  return done;
}

double ThrottledLink::last_completion() const {
  std::lock_guard lock(mu_);
  return last_completion_;
}

}  // namespace rfbkit::accel
