#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rfbkit/model/error.hpp"

namespace rfbkit::server {

// Malformed scenario file: bad JSON, unknown step kind, wrong field type.
class ScenarioParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed file that breaks a scenario invariant.
class ScenarioValidationError : public Error {
 public:
  using Error::Error;
};

enum class StepKind { Home, OpenApp, Wait, Scroll, End };
enum class AppId { Browser, MusicPlayer };

struct ScenarioStep {
  StepKind kind = StepKind::Wait;
  AppId app = AppId::Browser;  // OpenApp only
  double seconds = 0.0;        // how long the step lasts before the next one starts
  int dy = 0;                  // Scroll only: pixels per frame

  bool operator==(const ScenarioStep&) const = default;
};

struct Scenario {
  std::uint64_t seed = 0;
  int width = 480;
  int height = 800;
  std::vector<ScenarioStep> steps;

  double duration() const;
  // Time at which step i begins.
  double step_start(std::size_t i) const;

  bool operator==(const Scenario&) const = default;
};

// {"seed": n, "width": w, "height": h,
//  "steps": [{"kind": "home|open_app|wait|scroll|end", "app": "browser|music_player",
//             "seconds": s, "dy": d}, ...]}
Scenario parse_scenario(std::string_view json, const std::string& source = "<string>");
Scenario load_scenario(const std::filesystem::path& path);
void validate_scenario(const Scenario& scenario);

std::string_view step_kind_name(StepKind kind);
std::string_view app_name(AppId app);

}  // namespace rfbkit::server
