#include "rfbkit/bench/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "rfbkit/accel/relay.hpp"
#include "rfbkit/bench/report.hpp"
#include "rfbkit/bench/viewer.hpp"
#include "rfbkit/model/error.hpp"
#include "rfbkit/server/synth_server.hpp"

namespace rfbkit::bench {
namespace {

using namespace std::chrono_literals;
using WallClock = std::chrono::steady_clock;

std::string describe_mismatch(const PixelMismatch& m) {
  std::ostringstream os;
  os << "fidelity: first differing pixel at (" << m.x << ',' << m.y << "): expected 0x" << std::hex
     << m.expected << ", got 0x" << m.actual;
  return os.str();
}

// Everything one run owns, torn down in reverse order even on failure.
struct Pipeline {
  std::unique_ptr<Clock> clock;
  ManualClock* manual = nullptr;
  std::unique_ptr<server::SynthServer> server;
  std::thread server_thread;
  std::unique_ptr<accel::Relay> relay;
  std::thread relay_thread;
  std::unique_ptr<HeadlessViewer> viewer;

  ~Pipeline() {
    if (viewer) viewer->stop();
    if (relay) relay->stop();
    if (server) server->shutdown();
    if (relay_thread.joinable()) relay_thread.join();
    if (server_thread.joinable()) server_thread.join();
  }

  bool settled(double now) const {
    if (server && (server->hub().client_count() != 1 || !server->hub().quiescent(now))) return false;
    return relay->hub().client_count() == 1 && relay->hub().quiescent(now);
  }

  // Waits until no task can make progress at the current clock value.
  void wait_settled(double timeout_s) const {
    const auto deadline = WallClock::now() + std::chrono::duration<double>(timeout_s);
    // Settled twice in a row, so a message in flight between two checks is seen.
    int streak = 0;
    while (streak < 2) {
      if (!viewer->running()) throw TransportError("viewer stopped: " + viewer->error());
      if (relay->hub().closed()) throw TransportError("relay stopped: " + relay->upstream_error());
      streak = settled(clock->now()) ? streak + 1 : 0;
      if (WallClock::now() > deadline) throw TransportError("session did not settle in time");
      std::this_thread::sleep_for(streak ? 200us : 50us);
    }
  }
};

void run_virtual(Pipeline& p, const server::Scenario& sc, double timeout) {
  const auto ticks =
      static_cast<std::int64_t>(std::ceil(sc.duration() / server::kFrameSeconds - 1e-9));
  p.wait_settled(timeout);
  std::int64_t k = 0;
  while (true) {
    const double now = p.manual->now();
    const double next_tick = k < ticks ? static_cast<double>(k + 1) * server::kFrameSeconds
                                       : std::numeric_limits<double>::infinity();
    const auto wake = p.relay->hub().next_wakeup(now);
    if (wake && *wake <= next_tick) {
      p.manual->set(*wake);
    } else if (k < ticks) {
      ++k;
      p.manual->set(next_tick);
      p.server->step_to(static_cast<double>(k) * server::kFrameSeconds);
    } else {
      break;
    }
    p.server->hub().notify();
    p.relay->hub().notify();
    p.wait_settled(timeout);
  }
}

void run_realtime(Pipeline& p, const server::Scenario& sc, double timeout) {
  const auto ticks =
      static_cast<std::int64_t>(std::ceil(sc.duration() / server::kFrameSeconds - 1e-9));
  p.wait_settled(timeout);
  const double t0 = p.clock->now();
  for (std::int64_t k = 1; k <= ticks; ++k) {
    p.clock->sleep_until(t0 + static_cast<double>(k) * server::kFrameSeconds);
    p.server->step_to(static_cast<double>(k) * server::kFrameSeconds);
  }
  p.wait_settled(timeout);
}

RunResult run_external(const server::Scenario& sc, Encoding encoding, const BenchmarkPlan& plan) {
  Pipeline p;
  p.clock = std::make_unique<SteadyClock>();
  accel::RelayOptions ro;
  ro.target = {encoding, true};
  ro.link = plan.link;
  ro.clock = p.clock.get();
  p.relay = std::make_unique<accel::Relay>(wire::connect_tcp(*plan.server), ro);
  p.relay->start();
  auto [down_accel, down_client] = wire::make_pipe();
  p.relay_thread = std::thread([&p, c = std::move(down_accel)] { p.relay->serve_downstream(*c); });

  // The remote server plays the same scenario; its end frame is known.
  server::Scene expected_scene(sc);
  expected_scene.step_to(sc.duration());
  const Framebuffer& expected = expected_scene.framebuffer();

  const double start = p.clock->now();
  p.viewer = std::make_unique<HeadlessViewer>(std::move(down_client),
                                              std::vector<std::int32_t>{static_cast<std::int32_t>(encoding)});
  p.viewer->start();
  // The remote clock is not observable: let a full playback elapse, then
  // wait for the end frame.
  p.clock->sleep_until(start + sc.duration());
  const auto deadline = WallClock::now() + std::chrono::duration<double>(plan.drain_timeout_s);
  while (true) {
    if (!p.viewer->running()) return {std::nullopt, "viewer stopped: " + p.viewer->error()};
    const Framebuffer fb = p.viewer->framebuffer();
    const auto diff = first_difference(expected, fb);
    if (!diff) break;
    if (WallClock::now() > deadline) return {std::nullopt, describe_mismatch(*diff)};
    std::this_thread::sleep_for(20ms);
  }
  const double duration = p.clock->now() - start;
  return {p.relay->tap().snapshot(std::string(encoding_name(encoding)), duration), {}};
}

}  // namespace

void BenchmarkPlan::validate() const {
  if (encodings.empty()) throw ConfigError("no encodings to test");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  for (Encoding e : encodings) {
    if (e == Encoding::CopyRect) throw ConfigError("copyrect is not a pixel encoding");
  }
  link.validate();
  if (!(drain_timeout_s > 0)) throw ConfigError("drain timeout must be > 0");
}

bool BenchmarkReport::ok() const {
  if (!failures.empty()) return false;
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

RunResult run_session(const server::Scenario& sc, Encoding encoding, const BenchmarkPlan& plan) {
  try {
    if (plan.server) return run_external(sc, encoding, plan);

    Pipeline p;
    if (plan.realtime) {
      p.clock = std::make_unique<SteadyClock>();
    } else {
      auto manual = std::make_unique<ManualClock>(0.0);
      p.manual = manual.get();
      p.clock = std::move(manual);
    }
    p.server = std::make_unique<server::SynthServer>(sc);
    auto [up_server, up_accel] = wire::make_pipe();
    auto [down_accel, down_client] = wire::make_pipe();
    p.server_thread = std::thread([&p, c = std::move(up_server)] {
      server::SessionOptions so;
      so.clock = p.clock.get();
      try {
        p.server->serve(*c, so);
      } catch (const std::exception&) {
        // Surfaces as a relay failure.
      }
    });

    accel::RelayOptions ro;
    ro.target = {encoding, true};
    ro.link = plan.link;
    ro.clock = p.clock.get();
    p.relay = std::make_unique<accel::Relay>(std::move(up_accel), ro);
    p.relay->start();
    p.relay_thread = std::thread([&p, c = std::move(down_accel)] { p.relay->serve_downstream(*c); });

    const double start = p.clock->now();
    p.viewer = std::make_unique<HeadlessViewer>(std::move(down_client),
                                                std::vector<std::int32_t>{static_cast<std::int32_t>(encoding)});
    p.viewer->start();

    if (plan.realtime) {
      run_realtime(p, sc, plan.drain_timeout_s);
    } else {
      run_virtual(p, sc, plan.drain_timeout_s);
    }

    const double end = std::max(p.clock->now(), p.relay->link().last_completion());
    const Framebuffer expected = p.server->framebuffer();
    const Framebuffer actual = p.viewer->framebuffer();
    if (const auto diff = first_difference(expected, actual)) return {std::nullopt, describe_mismatch(*diff)};
    return {p.relay->tap().snapshot(std::string(encoding_name(encoding)), end - start), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
}

std::vector<EncodingSummary> aggregate_rows(const std::vector<BenchmarkRow>& rows) {
  std::vector<EncodingSummary> out;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.encoding == row.encoding; });
    if (it == out.end()) {
      out.push_back({});
      it = std::prev(out.end());
      it->encoding = row.encoding;
    }
    const auto& m = row.metrics;
    ++it->runs;
    it->updates += static_cast<double>(m.updates);
    it->duration_s += m.duration_s;
    it->rectangles += static_cast<double>(m.rectangles);
    it->captured_bytes += static_cast<double>(m.captured_bytes);
    it->compressed_bytes += static_cast<double>(m.compressed_bytes);
  }
  for (auto& s : out) {
    const double n = s.runs;
    s.updates /= n;
    s.duration_s /= n;
    s.rectangles /= n;
    s.captured_bytes /= n;
    s.compressed_bytes /= n;
    s.updates_per_second = s.duration_s > 0 ? s.updates / s.duration_s : 0.0;
    s.compression_ratio = s.compressed_bytes > 0 ? s.captured_bytes / s.compressed_bytes : 1.0;
  }
  return out;
}

BenchmarkReport run_benchmark(const BenchmarkPlan& plan) {
  plan.validate();
  server::Scenario sc = server::load_scenario(plan.scenario);
  if (plan.seed) sc.seed = *plan.seed;

  BenchmarkReport report;
  for (Encoding e : plan.encodings) {
    for (int rep = 0; rep < plan.repetitions; ++rep) {
      RunResult r = run_session(sc, e, plan);
      if (r.metrics) {
        report.rows.push_back({e, rep, *r.metrics});
      } else {
        report.failures.push_back({e, rep, r.failure});
      }
    }
  }
  report.aggregate = aggregate_rows(report.rows);
  if (report.aggregate.size() >= 2) report.verdicts = compare_encodings(report.aggregate);
  if (!plan.output.empty()) {
    std::ofstream out(plan.output, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + plan.output.string());
    out << render_report(report, ReportFormat::Csv);
  }
  return report;
}

}  // namespace rfbkit::bench
