#pragma once

#include <cstdint>
#include <optional>

#include "rfbkit/model/framebuffer.hpp"
#include "rfbkit/model/region.hpp"
#include "rfbkit/server/scenario.hpp"
#include "rfbkit/wire/messages.hpp"

namespace rfbkit::server {

inline constexpr double kFrameSeconds = 0.1;
// Key-down on 'n' jumps to the next scenario step.
inline constexpr std::uint32_t kNextStepKeysym = 0x006E;

// Scrollable content area and how far its content has moved.
struct ScrollMeta {
  Rect viewport;
  std::int64_t offset = 0;
  bool operator==(const ScrollMeta&) const = default;
};

enum class Screen { Home, Browser, MusicPlayer };

// Everything that determines the rendered pixels at a clock value.
struct SceneView {
  Screen screen = Screen::Home;
  std::int64_t frame = 0;  // animation frame of the visible app
  std::int64_t scroll = 0;
  std::size_t step = 0;    // index of the step in effect
  bool operator==(const SceneView&) const = default;
};

// Screen geometry shared by all scenes.
struct SceneLayout {
  Rect status_bar;
  Rect nav_bar;
  Rect app_window;
  Rect browser_toolbar;
  Rect page_viewport;
  Rect album_art;
  Rect bars;

  static SceneLayout for_size(int width, int height);
};

SceneView view_at(const Scenario& scenario, double clock);

// Pure function of (scenario, clock); no cursor.
Framebuffer render_scene(const Scenario& scenario, double clock);

// Mutable scene state: clock, current frame, cursor.
class Scene {
 public:
  explicit Scene(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const SceneLayout& layout() const { return layout_; }
  double clock() const { return clock_; }
  const SceneView& view() const { return view_; }
  const Framebuffer& framebuffer() const { return frame_; }
  bool finished() const { return clock_ >= scenario_.duration() - 1e-9; }

  // Moves the clock to to_clock and returns the damage. PreconditionError if
  // to_clock is behind the current clock.
  DamageRegion step_to(double to_clock);
  DamageRegion advance(double dt) { return step_to(clock_ + dt); }

  // Pointer motion repaints the cursor; a key-down of kNextStepKeysym jumps
  // to the next step. Other messages cause no damage.
  DamageRegion handle_input(const wire::ClientMessage& message);

  std::optional<ScrollMeta> scroll_meta() const;
  int cursor_x() const { return cursor_x_; }
  int cursor_y() const { return cursor_y_; }
  Rect cursor_rect() const;

 private:
  void compose(Framebuffer& out) const;

  Scenario scenario_;
  SceneLayout layout_;
  double clock_ = 0.0;
  SceneView view_;
  Framebuffer base_;   // scene without cursor
  Framebuffer frame_;  // base_ plus cursor
  int cursor_x_ = 0;
  int cursor_y_ = 0;
};

// Cursor glyph size; fits a 16x16 tile.
inline constexpr int kCursorWidth = 12;
inline constexpr int kCursorHeight = 16;

}  // namespace rfbkit::server
