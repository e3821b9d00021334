#include "rfbkit/server/damage.hpp"

#include <algorithm>
#include <vector>

#include "rfbkit/model/error.hpp"

namespace rfbkit::server {

DamageRegion compute_damage(const Framebuffer& before, const Framebuffer& after, int tile) {
  return compute_damage_in(before, after, before.bounds(), tile);
}

DamageRegion compute_damage_in(const Framebuffer& before, const Framebuffer& after,
                               const Rect& area, int tile) {
  if (before.width() != after.width() || before.height() != after.height()) {
    throw ShapeError("damage: framebuffer sizes differ");
  }
  if (!(before.format() == after.format())) throw ShapeError("damage: pixel formats differ");
  if (tile < 1) throw PreconditionError("damage: tile size must be positive");

  const Rect clip = area.intersect(before.bounds());
  std::vector<Rect> dirty;
  if (clip.empty()) return {};

  // Tiles are aligned to the screen grid, then clipped to `area`.
  const int tx0 = clip.x / tile;
  const int ty0 = clip.y / tile;
  const int tx1 = (clip.right() + tile - 1) / tile;
  const int ty1 = (clip.bottom() + tile - 1) / tile;
  for (int ty = ty0; ty < ty1; ++ty) {
    for (int tx = tx0; tx < tx1; ++tx) {
      const Rect t = Rect{tx * tile, ty * tile, tile, tile}.intersect(clip);
      bool differs = false;
      for (int y = t.y; y < t.bottom() && !differs; ++y) {
        auto a = before.row(y).subspan(t.x, t.w);
        auto b = after.row(y).subspan(t.x, t.w);
        differs = !std::equal(a.begin(), a.end(), b.begin());
      }
      if (differs) dirty.push_back(t);
    }
  }
  return normalize_unchecked(dirty);
}

}  // namespace rfbkit::server
