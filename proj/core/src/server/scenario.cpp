#include "rfbkit/server/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rfbkit::server {
namespace {

using nlohmann::json;

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& what) {
  throw ScenarioParseError(source + ": " + where + ": " + what);
}

std::string step_where(std::size_t i, const char* field) {
  return "steps[" + std::to_string(i) + "]." + field;
}

StepKind parse_kind(const std::string& s, const std::string& source, std::size_t i) {
  if (s == "home") return StepKind::Home;
  if (s == "open_app") return StepKind::OpenApp;
  if (s == "wait") return StepKind::Wait;
  if (s == "scroll") return StepKind::Scroll;
  if (s == "end") return StepKind::End;
  fail(source, step_where(i, "kind"), "unknown step kind '" + s + "'");
}

AppId parse_app(const std::string& s, const std::string& source, std::size_t i) {
  if (s == "browser") return AppId::Browser;
  if (s == "music_player") return AppId::MusicPlayer;
  fail(source, step_where(i, "app"), "unknown app '" + s + "'");
}

template <class T>
T field(const json& obj, const char* key, const std::string& source, const std::string& where, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    fail(source, where, std::string("bad type: ") + e.what());
  }
}

}  // namespace

double Scenario::duration() const {
  double total = 0.0;
  for (const auto& s : steps) total += s.seconds;
  return total;
}

double Scenario::step_start(std::size_t i) const {
  double t = 0.0;
  for (std::size_t k = 0; k < i && k < steps.size(); ++k) t += steps[k].seconds;
  return t;
}

std::string_view step_kind_name(StepKind kind) {
  switch (kind) {
    case StepKind::Home: return "home";
    case StepKind::OpenApp: return "open_app";
    case StepKind::Wait: return "wait";
    case StepKind::Scroll: return "scroll";
    case StepKind::End: return "end";
  }
  return "?";
}

std::string_view app_name(AppId app) {
  return app == AppId::Browser ? "browser" : "music_player";
}

void validate_scenario(const Scenario& sc) {
  if (sc.width < 16 || sc.height < 128 || sc.width > 4096 || sc.height > 4096) {
    throw ScenarioValidationError("screen size " + std::to_string(sc.width) + "x" +
                                  std::to_string(sc.height) + " outside 16x128..4096x4096");
  }
  if (sc.steps.empty()) throw ScenarioValidationError("scenario has no steps");
  for (std::size_t i = 0; i < sc.steps.size(); ++i) {
    const auto& s = sc.steps[i];
    const std::string where = "steps[" + std::to_string(i) + "]";
    if (!std::isfinite(s.seconds) || s.seconds < 0) {
      throw ScenarioValidationError(where + ": seconds must be finite and >= 0");
    }
    if (s.kind == StepKind::Wait && !(s.seconds > 0)) {
      throw ScenarioValidationError(where + ": wait needs seconds > 0");
    }
    if (s.kind == StepKind::Scroll) {
      if (s.dy == 0) throw ScenarioValidationError(where + ": scroll needs dy != 0");
      if (!(s.seconds > 0)) throw ScenarioValidationError(where + ": scroll needs seconds > 0");
    }
    if (s.kind == StepKind::End && i + 1 != sc.steps.size()) {
      throw ScenarioValidationError(where + ": end must be the last step");
    }
  }
  if (!(sc.duration() > 0)) throw ScenarioValidationError("total duration must be > 0");
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(source, "line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)), e.what());
  }
  if (!doc.is_object()) fail(source, "top level", "expected an object");

  Scenario sc;
  sc.seed = field<std::uint64_t>(doc, "seed", source, "seed", 0);
  sc.width = field<int>(doc, "width", source, "width", 480);
  sc.height = field<int>(doc, "height", source, "height", 800);

  auto steps = doc.find("steps");
  if (steps == doc.end()) fail(source, "steps", "missing field");
  if (!steps->is_array()) fail(source, "steps", "expected an array");
  for (std::size_t i = 0; i < steps->size(); ++i) {
    const json& js = (*steps)[i];
    if (!js.is_object()) fail(source, "steps[" + std::to_string(i) + "]", "expected an object");
    ScenarioStep step;
    auto kind = js.find("kind");
    if (kind == js.end()) fail(source, step_where(i, "kind"), "missing field");
    if (!kind->is_string()) fail(source, step_where(i, "kind"), "expected a string");
    step.kind = parse_kind(kind->get<std::string>(), source, i);
    step.seconds = field<double>(js, "seconds", source, step_where(i, "seconds"), 0.0);
    step.dy = field<int>(js, "dy", source, step_where(i, "dy"), 0);
    if (step.kind == StepKind::OpenApp) {
      auto app = js.find("app");
      if (app == js.end()) fail(source, step_where(i, "app"), "missing field");
      if (!app->is_string()) fail(source, step_where(i, "app"), "expected a string");
      step.app = parse_app(app->get<std::string>(), source, i);
    }
    sc.steps.push_back(step);
  }
  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioParseError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

}  // namespace rfbkit::server
