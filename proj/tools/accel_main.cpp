// Relay that re-encodes an upstream RFB session over a throttled link.
#include <chrono>
#include <iostream>
#include <list>
#include <thread>

#include "CLI11.hpp"
#include "rfbkit/accel/relay.hpp"
#include "rfbkit/wire/websocket.hpp"
#include "signals.hpp"

namespace {

void accept_loop(rfbkit::wire::TcpListener& listener, const rfbkit::accel::RelayConfig& cfg, bool websocket,
                 std::list<std::thread>& sessions, std::mutex& mu) {
  while (auto conn = listener.accept()) {
    std::lock_guard lock(mu);
    sessions.emplace_back([&cfg, websocket, c = std::move(conn)]() mutable {
      try {
        if (websocket) c = rfbkit::wire::accept_websocket(std::move(c));
        const auto m = rfbkit::accel::relay_session(cfg, *c);
        std::cerr << "accel: session done: " << m.updates << " updates, ratio " << m.compression_ratio << '\n';
      } catch (const std::exception& e) {
        std::cerr << "accel: session failed: " << e.what() << '\n';
      }
    });
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RFB accelerator"};
  std::string upstream;
  std::string listen = "127.0.0.1:5901";
  std::string ws_listen;
  std::string encoding = "zlib";
  bool strict = false;
  double rate = 8e6;
  std::size_t burst = 64 * 1024;
  double latency_ms = 0;
  std::string metrics;
  app.add_option("--upstream", upstream, "server host:port")->required();
  app.add_option("--listen", listen, "host:port for RFB viewers")->capture_default_str();
  app.add_option("--ws-listen", ws_listen, "host:port for WebSocket viewers");
  app.add_option("--encoding", encoding, "downstream encoding")
      ->check(CLI::IsMember({"raw", "rre", "hextile", "zlib"}))
      ->capture_default_str();
  app.add_flag("--strict", strict, "never fall back to raw for rectangles that grow");
  app.add_option("--rate", rate, "link rate, bits/s")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--burst", burst, "bucket size, bytes")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--latency", latency_ms, "one-way latency, ms")->check(CLI::NonNegativeNumber);
  app.add_option("--metrics", metrics, "CSV file to append one row per session to");
  CLI11_PARSE(app, argc, argv);

  try {
    rfbkit::accel::RelayConfig cfg;
    cfg.upstream = rfbkit::wire::parse_endpoint(upstream);
    cfg.listen = rfbkit::wire::parse_endpoint(listen);
    cfg.options.target = {*rfbkit::encoding_from_name(encoding), strict};
    cfg.options.link = {rate, burst, latency_ms / 1000.0};
    cfg.metrics = metrics;
    rfbkit::accel::validate_relay_config(cfg);

    rfbkit::wire::TcpListener rfb(cfg.listen);
    std::unique_ptr<rfbkit::wire::TcpListener> ws;
    if (!ws_listen.empty()) ws = std::make_unique<rfbkit::wire::TcpListener>(rfbkit::wire::parse_endpoint(ws_listen));
    std::cerr << "accel: " << encoding << " to port " << rfb.port();
    if (ws) std::cerr << ", websocket on port " << ws->port();
    std::cerr << '\n';

    tools::install_signal_handlers();
    std::list<std::thread> sessions;
    std::mutex mu;
    std::thread rfb_loop([&] { accept_loop(rfb, cfg, false, sessions, mu); });
    std::thread ws_loop;
    if (ws) ws_loop = std::thread([&] { accept_loop(*ws, cfg, true, sessions, mu); });
    while (!tools::g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    rfb.close();
    if (ws) ws->close();
    rfb_loop.join();
    if (ws_loop.joinable()) ws_loop.join();
    // Sessions end when their peers go away.
    for (auto& t : sessions) t.detach();
  } catch (const std::exception& e) {
    std::cerr << "accel: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
