#include "rfbkit/model/clock.hpp"

#include <thread>

namespace rfbkit {

SteadyClock::SteadyClock() : epoch_(std::chrono::steady_clock::now()) {}

double SteadyClock::now() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_).count();
}

void SteadyClock::sleep_until(double t) {
  const auto deadline =
      epoch_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(t));
  std::this_thread::sleep_until(deadline);
}

double ManualClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualClock::sleep_until(double t) {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return now_ >= t; });
}

void ManualClock::set(double t) {
  {
    std::lock_guard lock(mu_);
    if (t > now_) now_ = t;
  }
  cv_.notify_all();
}

void ManualClock::advance(double dt) {
  {
    std::lock_guard lock(mu_);
    now_ += dt;
  }
  cv_.notify_all();
}

}  // namespace rfbkit
