#include "rfbkit/server/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rfbkit/model/error.hpp"
#include "rfbkit/server/damage.hpp"

namespace rfbkit::server {
namespace {

constexpr int kStatusBar = 32;
constexpr int kNavBar = 48;
constexpr int kToolbar = 32;
constexpr int kBlockHeight = 128;
constexpr int kLineHeight = 12;
constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;
constexpr int kAdvance = 6;
constexpr int kGlyphCount = 36;
constexpr std::int64_t kRevealFrames = 12;
constexpr int kBarCount = 24;

std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t hash(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0, std::uint64_t d = 0) {
  return mix(mix(mix(mix(a) ^ b) ^ c) ^ d);
}

// Small counter-based generator for layout decisions.
struct Rng {
  std::uint64_t state;
  std::uint64_t next() { return mix(state++); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

Pixel rgb(std::uint32_t hex) {
  return make_pixel(static_cast<std::uint8_t>(hex >> 16), static_cast<std::uint8_t>(hex >> 8),
                    static_cast<std::uint8_t>(hex), PixelFormat::standard());
}

Pixel rgb(int r, int g, int b) {
  auto c = [](int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); };
  return make_pixel(c(r), c(g), c(b), PixelFormat::standard());
}

// 5x7 bitmaps, one bit per pixel, row-major from the top-left.
class Font {
 public:
  explicit Font(std::uint64_t seed) {
    for (int g = 0; g < kGlyphCount; ++g) {
      std::uint64_t bits = 0;
      Rng rng{hash(seed, 0xF047, static_cast<std::uint64_t>(g))};
      for (int i = 0; i < kGlyphW * kGlyphH; ++i) {
        if (rng.below(100) < 42) bits |= std::uint64_t{1} << i;
      }
      bits |= std::uint64_t{1} << (kGlyphW * 3 + rng.below(kGlyphW));
      glyphs_[g] = bits;
    }
  }
  bool lit(int glyph, int gx, int gy) const {
    return (glyphs_[glyph] >> (gy * kGlyphW + gx)) & 1;
  }

 private:
  std::array<std::uint64_t, kGlyphCount> glyphs_{};
};

void draw_glyph(Framebuffer& fb, const Font& font, int glyph, int x, int y, Pixel colour,
                const Rect& clip, int scale = 1) {
  for (int gy = 0; gy < kGlyphH; ++gy) {
    for (int gx = 0; gx < kGlyphW; ++gx) {
      if (!font.lit(glyph, gx, gy)) continue;
      fb.fill(Rect{x + gx * scale, y + gy * scale, scale, scale}.intersect(clip), colour);
    }
  }
}

// Seeded word sequence, returns the x just past the text.
int draw_words(Framebuffer& fb, const Font& font, Rng& rng, int x, int y, int max_x, Pixel colour,
               const Rect& clip, int scale = 1) {
  while (true) {
    const int len = 2 + rng.below(7);
    if (x + len * kAdvance * scale > max_x) break;
    for (int i = 0; i < len; ++i) {
      draw_glyph(fb, font, rng.below(kGlyphCount), x, y, colour, clip, scale);
      x += kAdvance * scale;
    }
    x += kAdvance * scale;
  }
  return x;
}

void fill_circle(Framebuffer& fb, int cx, int cy, int r, Pixel colour) {
  for (int y = -r; y <= r; ++y) {
    const int half = static_cast<int>(std::sqrt(static_cast<double>(r * r - y * y)));
    fb.fill({cx - half, cy + y, 2 * half + 1, 1}, colour);
  }
}

void draw_status_bar(Framebuffer& fb, const SceneLayout& lay, const Font& font, std::uint64_t seed) {
  fb.fill(lay.status_bar, rgb(0x1F1F24));
  Rng rng{hash(seed, 0x57A7)};
  const Pixel fg = rgb(0xF0F0F0);
  for (int i = 0; i < 4; ++i) {
    draw_glyph(fb, font, rng.below(kGlyphCount), 12 + i * kAdvance, 12, fg, lay.status_bar);
  }
  const int bx = lay.status_bar.right() - 40;
  fb.fill({bx, 11, 24, 10}, fg);
  fb.fill({bx + 24, 14, 3, 4}, fg);
  fb.fill({bx + 2, 13, 14, 6}, rgb(0x3CC45A));
  for (int i = 0; i < 4; ++i) fb.fill({bx - 28 + i * 5, 20 - i * 3, 3, 1 + i * 3}, fg);
}

void draw_nav_bar(Framebuffer& fb, const SceneLayout& lay) {
  fb.fill(lay.nav_bar, rgb(0x000000));
  const Pixel fg = rgb(0xDADADA);
  const int cy = lay.nav_bar.y + lay.nav_bar.h / 2;
  const int w = lay.nav_bar.w;
  for (int i = 0; i < 10; ++i) fb.fill({w / 4 - 5 + i, cy - i / 2, 1, i + 1}, fg);
  fill_circle(fb, w / 2, cy, 9, fg);
  fill_circle(fb, w / 2, cy, 6, rgb(0x000000));
  fb.fill({3 * w / 4 - 8, cy - 8, 16, 16}, fg);
  fb.fill({3 * w / 4 - 5, cy - 5, 10, 10}, rgb(0x000000));
}

void draw_home(Framebuffer& fb, const SceneLayout& lay, const Font& font, std::uint64_t seed) {
  const Rect& win = lay.app_window;
  // Banded wallpaper: large uniform areas.
  constexpr int kBands = 8;
  for (int b = 0; b < kBands; ++b) {
    const int y0 = win.y + win.h * b / kBands;
    const int y1 = win.y + win.h * (b + 1) / kBands;
    fb.fill({win.x, y0, win.w, y1 - y0}, rgb(30 + b * 6, 60 + b * 9, 110 + b * 10));
  }
  constexpr int kCols = 4;
  constexpr int kRows = 5;
  constexpr int kIcon = 64;
  const int cell_w = win.w / kCols;
  const int cell_h = std::min(120, win.h / (kRows + 1));
  static constexpr std::array<std::uint32_t, 8> kPalette = {
      0xE53935, 0x43A047, 0x1E88E5, 0xFDD835, 0x8E24AA, 0xFB8C00, 0x00ACC1, 0x6D4C41};
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      Rng rng{hash(seed, 0x1C0, static_cast<std::uint64_t>(r * kCols + c))};
      const int x = win.x + c * cell_w + (cell_w - kIcon) / 2;
      const int y = win.y + 24 + r * cell_h;
      const Pixel body = rgb(kPalette[rng.below(8)]);
      fb.fill({x, y, kIcon, kIcon}, body);
      fb.fill({x, y, 4, 4}, fb.at(x, y - 1));
      fb.fill({x + kIcon - 4, y, 4, 4}, fb.at(x + kIcon - 1, y - 1));
      const Pixel mark = rgb(0xF7F7F2);
      switch (rng.below(3)) {
        case 0: fill_circle(fb, x + kIcon / 2, y + kIcon / 2, 18, mark); break;
        case 1: fb.fill({x + 16, y + 16, 32, 32}, mark); break;
        default:
          for (int i = 0; i < 28; ++i) fb.fill({x + 18 + i, y + 46 - i, 4, 4}, mark);
      }
      Rng words{rng.next()};
      const int len = 3 + words.below(6);
      int tx = x + (kIcon - len * kAdvance) / 2;
      for (int i = 0; i < len; ++i, tx += kAdvance) {
        draw_glyph(fb, font, words.below(kGlyphCount), tx, y + kIcon + 8, rgb(0xF7F7F2), win);
      }
    }
  }
}

// One scanline of the page at page coordinate py, x limited to [0, width).
void draw_page_block(Framebuffer& fb, const Font& font, std::uint64_t seed, std::int64_t block,
                     int screen_y, const Rect& clip) {
  const int w = clip.w;
  const std::uint64_t bh = hash(seed, 0xB10C, static_cast<std::uint64_t>(block));
  const int kind = block == 0 ? 3 : static_cast<int>(bh % 3);
  if (kind == 3) {
    Rng rng{bh};
    draw_words(fb, font, rng, 16, screen_y + 24, w - 16, rgb(0x111111), clip, 3);
    Rng sub{bh + 7};
    draw_words(fb, font, sub, 16, screen_y + 72, w - 120, rgb(0x5F6368), clip, 2);
    return;
  }
  if (kind == 2) {
    // Photo: smooth gradient with grain.
    const Rect img = Rect{12, screen_y + 12, w - 24, kBlockHeight - 24}.intersect(clip);
    const int r0 = static_cast<int>(bh & 0xFF);
    const int g0 = static_cast<int>((bh >> 8) & 0xFF);
    const int b0 = static_cast<int>((bh >> 16) & 0xFF);
    for (int y = img.y; y < img.bottom(); ++y) {
      const int ry = y - screen_y;
      auto row = fb.row(y);
      for (int x = img.x; x < img.right(); ++x) {
        const std::uint64_t n = hash(bh, static_cast<std::uint64_t>(ry), static_cast<std::uint64_t>(x));
        const int grain = static_cast<int>(n & 0x1F) - 16;
        row[x] = rgb(r0 / 2 + x / 4 + grain, g0 / 2 + ry + grain, b0 / 2 + (x + ry) / 6 + grain);
      }
    }
    return;
  }
  // Paragraph.
  const int lines = 8 + static_cast<int>((bh >> 8) % 3);
  for (int line = 0; line < lines; ++line) {
    Rng rng{hash(bh, static_cast<std::uint64_t>(line))};
    const int max_x = line + 1 == lines ? w / 2 + rng.below(w / 3) : w - 16;
    const Pixel colour = rng.below(6) == 0 ? rgb(0x1A0DAB) : rgb(0x202124);
    draw_words(fb, font, rng, 16, screen_y + 10 + line * kLineHeight, max_x, colour, clip);
  }
}

void draw_browser(Framebuffer& fb, const SceneLayout& lay, const Font& font, std::uint64_t seed,
                  std::int64_t frame, std::int64_t scroll) {
  const Rect& bar = lay.browser_toolbar;
  fb.fill(bar, rgb(0xF1F3F4));
  const Rect field{bar.x + 40, bar.y + 5, bar.w - 80, bar.h - 10};
  fb.fill(field, rgb(0xFFFFFF));
  Rng url{hash(seed, 0x0421)};
  draw_words(fb, font, url, field.x + 8, field.y + 8, field.right() - 8, rgb(0x3C4043), field);
  fill_circle(fb, bar.x + 20, bar.y + bar.h / 2, 7, rgb(0x5F6368));
  fill_circle(fb, bar.right() - 20, bar.y + bar.h / 2, 7, rgb(0x5F6368));

  const Rect& view = lay.page_viewport;
  fb.fill(view, rgb(0xFFFFFF));
  const int revealed = static_cast<int>(view.h * std::min(frame, kRevealFrames) / kRevealFrames);
  const Rect clip{view.x, view.y, view.w, revealed};
  if (clip.empty()) return;
  const std::int64_t first = scroll / kBlockHeight;
  const std::int64_t last = (scroll + view.h - 1) / kBlockHeight;
  for (std::int64_t b = first; b <= last; ++b) {
    const int screen_y = view.y + static_cast<int>(b * kBlockHeight - scroll);
    draw_page_block(fb, font, seed, b, screen_y, clip);
  }
  if (frame < kRevealFrames) {
    const int progress = static_cast<int>(bar.w * (frame + 1) / (kRevealFrames + 1));
    fb.fill({bar.x, bar.bottom() - 3, progress, 3}, rgb(0x1A73E8));
  }
}

void draw_bars(Framebuffer& fb, const Rect& bars, std::uint64_t seed, std::int64_t frame) {
  fb.fill(bars, rgb(0x0E0E16));
  const int slot = bars.w / kBarCount;
  const int bar_w = std::max(1, slot - 4);
  for (int i = 0; i < kBarCount; ++i) {
    const std::uint64_t h = hash(seed, 0xBA5, static_cast<std::uint64_t>(frame), static_cast<std::uint64_t>(i));
    const int height = bars.h * (15 + static_cast<int>(h % 86)) / 100;
    const Rect r = Rect{bars.x + i * slot + 2, bars.bottom() - height, bar_w, height}.intersect(bars);
    for (int y = r.y; y < r.bottom(); ++y) {
      const int level = (bars.bottom() - y) / 8;
      const Pixel base = rgb(40 + level * 7, 200 - level * 5, 120 + level * 4);
      const Pixel light = rgb(90 + level * 7, 240 - level * 5, 170 + level * 4);
      const Pixel dark = rgb(10 + level * 5, 120 - level * 3, 80 + level * 3);
      auto row = fb.row(y);
      // Three-colour dither.
      for (int x = r.x; x < r.right(); ++x) {
        row[x] = ((x + y) & 1) == 0 ? base : (((x >> 1) + y) & 1) ? light : dark;
      }
    }
  }
}

void draw_music_player(Framebuffer& fb, const SceneLayout& lay, const Font& font, std::uint64_t seed,
                       std::int64_t frame) {
  const Rect& win = lay.app_window;
  fb.fill(win, rgb(0x181820));
  const Rect& art = lay.album_art;
  static constexpr std::array<std::uint32_t, 6> kArt = {0xD81B60, 0xF4511E, 0xFFB300,
                                                       0x7CB342, 0x039BE5, 0x5E35B1};
  Rng rng{hash(seed, 0xA17)};
  const int rings = 6;
  for (int i = 0; i < rings; ++i) {
    const int inset = i * art.w / (2 * rings);
    fb.fill({art.x + inset, art.y + inset, art.w - 2 * inset, art.h - 2 * inset},
            rgb(kArt[static_cast<std::size_t>(rng.below(6))]));
  }
  const int text_y = art.bottom() + 20;
  draw_words(fb, font, rng, win.x + 40, text_y, win.right() - 40, rgb(0xFFFFFF), win, 2);
  draw_words(fb, font, rng, win.x + 40, text_y + 24, win.right() - 160, rgb(0x9AA0A6), win);
  const int track_y = text_y + 48;
  fb.fill({win.x + 40, track_y, win.w - 80, 4}, rgb(0x3C3C48));
  fb.fill({win.x + 40, track_y, (win.w - 80) / 3, 4}, rgb(0x1DB954));
  const int cy = track_y + 40;
  fill_circle(fb, win.x + win.w / 2, cy, 22, rgb(0xFFFFFF));
  fb.fill({win.x + win.w / 2 - 6, cy - 9, 4, 18}, rgb(0x181820));
  fb.fill({win.x + win.w / 2 + 3, cy - 9, 4, 18}, rgb(0x181820));
  fill_circle(fb, win.x + win.w / 2 - 80, cy, 12, rgb(0xBDBDBD));
  fill_circle(fb, win.x + win.w / 2 + 80, cy, 12, rgb(0xBDBDBD));
  draw_bars(fb, lay.bars, seed, frame);
}

// 'X' outline, 'o' fill, '.' transparent.
constexpr std::array<const char*, kCursorHeight> kCursor = {
    "X...........", "XX..........", "XoX.........", "XooX........",
    "XoooX.......", "XooooX......", "XoooooX.....", "XooooooX....",
    "XoooooooX...", "XooooooooX..", "XoooooXXXXX.", "XooXooX.....",
    "XoX.XooX....", "XX..XooX....", "X....XooX...", ".....XXX....",
};

}  // namespace

SceneLayout SceneLayout::for_size(int width, int height) {
  SceneLayout l;
  l.status_bar = {0, 0, width, kStatusBar};
  l.nav_bar = {0, height - kNavBar, width, kNavBar};
  l.app_window = {0, kStatusBar, width, height - kStatusBar - kNavBar};
  l.browser_toolbar = {0, kStatusBar, width, kToolbar};
  l.page_viewport = {0, kStatusBar + kToolbar, width, l.app_window.h - kToolbar};
  // Animated area: full width, 30% of the screen height, at the bottom of the app window.
  const int bars_h = std::min(l.app_window.h / 2, (height * 3 + 5) / 10);
  l.bars = {0, l.nav_bar.y - bars_h, width, bars_h};
  const int chrome_h = l.bars.y - l.app_window.y;
  const int art = std::max(8, std::min(width - 160, chrome_h / 2));
  l.album_art = {(width - art) / 2, l.app_window.y + 16, art, art};
  return l;
}

SceneView view_at(const Scenario& sc, double clock) {
  constexpr double kEps = 1e-6;
  const double t = std::clamp(clock, 0.0, sc.duration());
  SceneView v;
  double start = 0.0;
  double app_opened = 0.0;
  std::int64_t scroll = 0;
  auto frames = [&](double from, double to) {
    return static_cast<std::int64_t>(std::floor((to - from) / kFrameSeconds + kEps));
  };
  for (std::size_t i = 0; i < sc.steps.size(); ++i) {
    const auto& step = sc.steps[i];
    if (start > t + kEps) break;
    v.step = i;
    switch (step.kind) {
      case StepKind::Home:
        v.screen = Screen::Home;
        scroll = 0;
        break;
      case StepKind::OpenApp:
        v.screen = step.app == AppId::Browser ? Screen::Browser : Screen::MusicPlayer;
        app_opened = start;
        scroll = 0;
        break;
      case StepKind::Scroll:
        if (v.screen == Screen::Browser) {
          const std::int64_t n = frames(start, std::min(t, start + step.seconds));
          scroll = std::max<std::int64_t>(0, scroll + step.dy * n);
        }
        break;
      case StepKind::Wait:
      case StepKind::End:
        break;
    }
    start += step.seconds;
  }
  switch (v.screen) {
    case Screen::Home: v.frame = 0; break;
    case Screen::Browser: v.frame = std::min(frames(app_opened, t), kRevealFrames); break;
    case Screen::MusicPlayer: v.frame = frames(app_opened, t); break;
  }
  v.scroll = v.screen == Screen::Browser ? scroll : 0;
  return v;
}

namespace {

Framebuffer render_view(const Scenario& sc, const SceneLayout& lay, const SceneView& v) {
  Framebuffer fb(sc.width, sc.height);
  const Font font(sc.seed);
  draw_status_bar(fb, lay, font, sc.seed);
  draw_nav_bar(fb, lay);
  switch (v.screen) {
    case Screen::Home: draw_home(fb, lay, font, sc.seed); break;
    case Screen::Browser: draw_browser(fb, lay, font, sc.seed, v.frame, v.scroll); break;
    case Screen::MusicPlayer: draw_music_player(fb, lay, font, sc.seed, v.frame); break;
  }
  return fb;
}

}  // namespace

Framebuffer render_scene(const Scenario& sc, double clock) {
  return render_view(sc, SceneLayout::for_size(sc.width, sc.height), view_at(sc, clock));
}

Scene::Scene(Scenario scenario)
    : scenario_(std::move(scenario)),
      layout_(SceneLayout::for_size(scenario_.width, scenario_.height)) {
  validate_scenario(scenario_);
  view_ = view_at(scenario_, 0.0);
  base_ = render_view(scenario_, layout_, view_);
  frame_ = base_;
  compose(frame_);
}

Rect Scene::cursor_rect() const {
  return Rect{cursor_x_, cursor_y_, kCursorWidth, kCursorHeight}.intersect(base_.bounds());
}

void Scene::compose(Framebuffer& out) const {
  const Pixel outline = rgb(0x000000);
  const Pixel fill = rgb(0xFFFFFF);
  for (int gy = 0; gy < kCursorHeight; ++gy) {
    for (int gx = 0; gx < kCursorWidth; ++gx) {
      const int x = cursor_x_ + gx;
      const int y = cursor_y_ + gy;
      if (x >= out.width() || y >= out.height()) continue;
      const char c = kCursor[static_cast<std::size_t>(gy)][gx];
      if (c == 'X') out.set(x, y, outline);
      if (c == 'o') out.set(x, y, fill);
    }
  }
}

DamageRegion Scene::step_to(double to_clock) {
  if (to_clock < clock_) throw PreconditionError("scene clock cannot move backwards");
  clock_ = to_clock;
  const SceneView next = view_at(scenario_, clock_);
  if (next == view_) return {};
  view_ = next;
  base_ = render_view(scenario_, layout_, view_);
  Framebuffer composed = base_;
  compose(composed);
  DamageRegion damage = compute_damage(frame_, composed);
  frame_ = std::move(composed);
  return damage;
}

DamageRegion Scene::handle_input(const wire::ClientMessage& message) {
  if (const auto* key = std::get_if<wire::KeyEvent>(&message)) {
    if (!key->down || key->keysym != kNextStepKeysym) return {};
    double target = scenario_.duration();
    for (std::size_t i = 1; i < scenario_.steps.size(); ++i) {
      const double s = scenario_.step_start(i);
      if (s > clock_ + 1e-9) {
        target = s;
        break;
      }
    }
    return step_to(std::max(target, clock_));
  }
  if (const auto* ptr = std::get_if<wire::PointerEvent>(&message)) {
    const int x = std::clamp<int>(ptr->x, 0, base_.width() - 1);
    const int y = std::clamp<int>(ptr->y, 0, base_.height() - 1);
    if (x == cursor_x_ && y == cursor_y_) return {};
    const Rect old_rect = cursor_rect();
    frame_.copy_from(base_, old_rect);
    cursor_x_ = x;
    cursor_y_ = y;
    compose(frame_);
    DamageRegion damage;
    damage.add(old_rect);
    damage.add(cursor_rect());
    return damage;
  }
  return {};
}

std::optional<ScrollMeta> Scene::scroll_meta() const {
  if (view_.screen != Screen::Browser) return std::nullopt;
  return ScrollMeta{layout_.page_viewport, view_.scroll};
}

}  // namespace rfbkit::server
