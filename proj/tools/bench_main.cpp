// Replays a scenario once per encoding and prints the comparison table.
#include <iostream>

#include "CLI11.hpp"
#include "rfbkit/bench/benchmark.hpp"
#include "rfbkit/bench/report.hpp"
#include "rfbkit/model/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"RFB encoding benchmark"};
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> encodings = {"raw", "hextile", "zlib"};
  double rate = 8e6;
  double latency_ms = 40;
  std::size_t burst = 64 * 1024;
  int reps = 1;
  std::string out;
  bool realtime = false;
  std::string server;
  app.add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override the scenario seed");
  app.add_option("--encodings", encodings, "comma separated")
      ->delimiter(',')
      ->check(CLI::IsMember({"raw", "rre", "hextile", "zlib"}))
      ->capture_default_str();
  app.add_option("--rate", rate, "link rate, bits/s")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--latency", latency_ms, "one-way latency, ms")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--burst", burst, "bucket size, bytes")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--reps", reps, "repetitions per encoding")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", out, "CSV output");
  app.add_flag("--realtime", realtime, "wall-clock playback instead of the virtual clock");
  app.add_option("--server", server, "external server host:port instead of an in-process one");
  CLI11_PARSE(app, argc, argv);

  try {
    rfbkit::bench::BenchmarkPlan plan;
    plan.scenario = scenario;
    plan.seed = seed;
    for (const auto& e : encodings) plan.encodings.push_back(*rfbkit::encoding_from_name(e));
    plan.link = {rate, burst, latency_ms / 1000.0};
    plan.repetitions = reps;
    plan.output = out;
    plan.realtime = realtime;
    if (!server.empty()) plan.server = rfbkit::wire::parse_endpoint(server);

    const auto report = rfbkit::bench::run_benchmark(plan);
    std::cout << rfbkit::bench::render_report(report, rfbkit::bench::ReportFormat::Text);
    return report.ok() ? 0 : 1;
  } catch (const rfbkit::Error& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 2;
  }
}
