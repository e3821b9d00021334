#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>

namespace rfbkit {

// Seconds since an arbitrary epoch.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() const = 0;
  virtual void sleep_until(double t) = 0;
  // Virtual clocks do not pass time on their own.
  virtual bool is_virtual() const = 0;
};

class SteadyClock final : public Clock {
 public:
  SteadyClock();
  double now() const override;
  void sleep_until(double t) override;
  bool is_virtual() const override { return false; }

 private:
  std::chrono::steady_clock::time_point epoch_;
};

// Advanced explicitly by a driver.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(double start = 0.0) : now_(start) {}
  double now() const override;
  // Blocks until another thread advances the clock to t.
  void sleep_until(double t) override;
  bool is_virtual() const override { return true; }

  void set(double t);
  void advance(double dt);

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  double now_;
};

}  // namespace rfbkit
