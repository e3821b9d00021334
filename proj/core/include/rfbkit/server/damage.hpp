#pragma once

#include "rfbkit/model/framebuffer.hpp"
#include "rfbkit/model/region.hpp"

namespace rfbkit::server {

inline constexpr int kDamageTile = 16;

// Tile-aligned (clipped at the edges) cover of every pixel that differs.
// ShapeError if the framebuffers differ in size or format.
DamageRegion compute_damage(const Framebuffer& before, const Framebuffer& after,
                            int tile = kDamageTile);

// Same, restricted to `area`.
DamageRegion compute_damage_in(const Framebuffer& before, const Framebuffer& after,
                               const Rect& area, int tile = kDamageTile);

}  // namespace rfbkit::server
