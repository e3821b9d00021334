#include "rfbkit/server/synth_server.hpp"

#include <chrono>
#include <thread>
#include <vector>

#include "rfbkit/server/damage.hpp"

namespace rfbkit::server {

SynthServer::SynthServer(Scenario scenario)
    : scenario_(scenario),
      scene_(std::move(scenario)),
      hub_(scene_.framebuffer(), scene_.scroll_meta()) {}

DamageRegion SynthServer::publish(DamageRegion damage) {
  if (!damage.empty()) hub_.publish(scene_.framebuffer(), damage, scene_.scroll_meta());
  return damage;
}

DamageRegion SynthServer::advance(double dt) {
  std::lock_guard lock(mu_);
  return publish(scene_.advance(dt));
}

DamageRegion SynthServer::step_to(double clock) {
  std::lock_guard lock(mu_);
  return publish(scene_.step_to(clock));
}

DamageRegion SynthServer::handle_input(const wire::ClientMessage& message) {
  std::lock_guard lock(mu_);
  return publish(scene_.handle_input(message));
}

DamageRegion SynthServer::restart() {
  std::lock_guard lock(mu_);
  const Framebuffer before = scene_.framebuffer();
  scene_ = Scene(scenario_);
  return publish(compute_damage(before, scene_.framebuffer()));
}

double SynthServer::clock() const {
  std::lock_guard lock(mu_);
  return scene_.clock();
}

bool SynthServer::finished() const {
  std::lock_guard lock(mu_);
  return scene_.finished();
}

Framebuffer SynthServer::framebuffer() const {
  std::lock_guard lock(mu_);
  return scene_.framebuffer();
}

SessionSummary SynthServer::serve(wire::Connection& conn, SessionOptions options) {
  InputHandler user = std::move(options.on_input);
  options.on_input = [this, user](const wire::ClientMessage& msg, std::span<const std::uint8_t> raw) {
    if (std::holds_alternative<wire::KeyEvent>(msg) || std::holds_alternative<wire::PointerEvent>(msg)) {
      handle_input(msg);
    }
    if (user) user(msg, raw);
  };
  return serve_session(conn, hub_, options);
}

void run_tcp_server(SynthServer& server, wire::TcpListener& listener, ClockMode mode,
                    std::stop_token stop) {
  std::vector<std::jthread> sessions;
  std::jthread acceptor([&] {
    while (auto conn = listener.accept()) {
      // A client arriving after the end starts a new playback.
      if (server.finished()) server.restart();
      sessions.emplace_back([&server, c = std::move(conn)] {
        try {
          server.serve(*c);
        } catch (const std::exception&) {
          // Failed handshake: drop the client.
        }
      });
    }
  });

  using namespace std::chrono_literals;
  auto next = std::chrono::steady_clock::now();
  while (!stop.stop_requested()) {
    if (server.hub().client_count() == 0) {
      // Each new audience gets the scenario from the start.
      if (server.clock() > 0.0) server.restart();
      std::this_thread::sleep_for(5ms);
      next = std::chrono::steady_clock::now() + 100ms;
      continue;
    }
    if (server.finished()) {
      std::this_thread::sleep_for(5ms);
      next = std::chrono::steady_clock::now() + 100ms;
      continue;
    }
    if (mode == ClockMode::Real) {
      std::this_thread::sleep_until(next);
      next += 100ms;
      server.advance(kFrameSeconds);
    } else if (server.hub().quiescent(0.0)) {
      server.advance(kFrameSeconds);
      std::this_thread::sleep_for(1ms);
    } else {
      std::this_thread::sleep_for(1ms);
    }
  }
  listener.close();
  acceptor.join();
  server.shutdown();
  sessions.clear();
}

}  // namespace rfbkit::server
