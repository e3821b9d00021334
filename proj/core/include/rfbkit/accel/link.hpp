#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <span>
#include <vector>

#include "rfbkit/model/clock.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::accel {

struct LinkConfig {
  double rate_bps = 8'000'000.0;
  std::size_t burst_bytes = 64 * 1024;
  double latency_s = 0.0;

  // ConfigError unless rate > 0, burst > 0 and latency >= 0.
  void validate() const;
};

struct Delivery {
  double time = 0.0;  // arrival at the far end
  std::size_t offset = 0;
  std::size_t bytes = 0;
};

// Token bucket that starts empty at `start`. Writes are cut into chunks of
// at most `burst` bytes; each chunk leaves once enough tokens have
// accumulated and arrives `latency` later.
class TokenBucket {
 public:
  TokenBucket(LinkConfig config, double start);

  const LinkConfig& config() const { return config_; }
  // Schedules n bytes submitted at `now`, in order after everything
  // scheduled before.
  std::vector<Delivery> schedule(double now, std::size_t n);
  // Arrival time of the last byte of a write of n bytes at `now`
  // (now + latency for n == 0).
  double completion(double now, std::size_t n);

 private:
  LinkConfig config_;
  double tokens_ = 0.0;
  double last_ = 0.0;
};

// Paces `bytes` through the bucket. On a real clock each chunk is written
// when it would arrive; on a virtual clock everything is written at once
// and only the timing is simulated. Returns the arrival time of the last
// byte.
double throttle_write(TokenBucket& bucket, Clock& clock, wire::Connection& conn,
                      std::span<const std::uint8_t> bytes);

// Serializes throttle_write calls for one connection.
class ThrottledLink {
 public:
  ThrottledLink(LinkConfig config, Clock& clock);
  double write(wire::Connection& conn, std::span<const std::uint8_t> bytes);
  double last_completion() const;

 private:
  mutable std::mutex mu_;
  Clock& clock_;
  TokenBucket bucket_;
  double last_completion_ = 0.0;
};

}  // namespace rfbkit::accel
