#pragma once

#include <mutex>
#include <stop_token>

#include "rfbkit/server/scene.hpp"
#include "rfbkit/server/screen_hub.hpp"
#include "rfbkit/server/session.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::server {

// Scene plus the hub its sessions read from. Scene changes and snapshots
// are serialized; encoding happens in the sessions.
class SynthServer {
 public:
  explicit SynthServer(Scenario scenario);

  ScreenHub& hub() { return hub_; }
  const Scenario& scenario() const { return scenario_; }

  DamageRegion advance(double dt);
  DamageRegion step_to(double clock);
  DamageRegion handle_input(const wire::ClientMessage& message);
  // Back to clock 0 with the cursor at the origin.
  DamageRegion restart();
  double clock() const;
  bool finished() const;
  Framebuffer framebuffer() const;

  // Serves one client. Key and pointer input reach the scene before any
  // handler in `options`.
  SessionSummary serve(wire::Connection& conn, SessionOptions options = {});
  // Ends all sessions.
  void shutdown() { hub_.close_all(); }

 private:
  DamageRegion publish(DamageRegion damage);

  Scenario scenario_;
  mutable std::mutex mu_;
  Scene scene_;
  ScreenHub hub_;
};

enum class ClockMode { Real, Virtual };

// Accepts clients until stop is requested, one thread per session.
// Real: the scene advances every 100 ms of wall time once a client is
// connected. Virtual: it advances one frame whenever every connected client
// is waiting with nothing left to send. The scenario restarts from the
// beginning once the last client leaves or when a client arrives after the end.
void run_tcp_server(SynthServer& server, wire::TcpListener& listener, ClockMode mode,
                    std::stop_token stop);

}  // namespace rfbkit::server
