// Synthetic RFB desktop replaying a scenario file.
#include <chrono>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "rfbkit/server/synth_server.hpp"
#include "signals.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic RFB server"};
  std::string listen = "127.0.0.1:5900";
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string clock = "real";
  app.add_option("--listen", listen, "host:port to accept viewers on")->capture_default_str();
  app.add_option("--scenario", scenario_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override the scenario seed");
  app.add_option("--clock", clock, "real: 100 ms frames in wall time; virtual: next frame once clients are idle")
      ->check(CLI::IsMember({"real", "virtual"}))
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    auto scenario = rfbkit::server::load_scenario(scenario_path);
    if (seed) scenario.seed = *seed;
    rfbkit::server::SynthServer server(scenario);
    rfbkit::wire::TcpListener listener(rfbkit::wire::parse_endpoint(listen));
    std::cerr << "server: " << scenario.width << 'x' << scenario.height << ", "
              << scenario.duration() << " s scenario, listening on port " << listener.port() << '\n';

    tools::install_signal_handlers();
    std::stop_source stop;
    std::thread runner([&] {
      rfbkit::server::run_tcp_server(server, listener,
                                     clock == "virtual" ? rfbkit::server::ClockMode::Virtual
                                                        : rfbkit::server::ClockMode::Real,
                                     stop.get_token());
    });
    while (!tools::g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    stop.request_stop();
    runner.join();
  } catch (const std::exception& e) {
    std::cerr << "server: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
