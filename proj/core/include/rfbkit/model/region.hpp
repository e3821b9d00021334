#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rfbkit/model/rect.hpp"

namespace rfbkit {

// A set of pairwise disjoint rectangles, kept in top-to-bottom,
// left-to-right order.
class DamageRegion {
 public:
  DamageRegion() = default;

  const std::vector<Rect>& rects() const { return rects_; }
  bool empty() const { return rects_.empty(); }
  std::size_t size() const { return rects_.size(); }
  std::int64_t pixel_count() const;
  bool covers(int x, int y) const;
  Rect bounding_box() const;

  void add(const Rect& r);
  void add(const DamageRegion& other);
  void subtract(const Rect& r);
  DamageRegion clipped(const Rect& clip) const;
  void clear() { rects_.clear(); }

  bool operator==(const DamageRegion&) const = default;

 private:
  friend DamageRegion normalize_unchecked(std::span<const Rect> rects);
  std::vector<Rect> rects_;
};

// Splits the input into y-bands, merges x-runs inside each band and joins
// vertically adjacent runs with identical extent. Throws BoundsError if any
// rect leaves `bounds`. Empty input rects are dropped.
DamageRegion region_normalize(std::span<const Rect> rects, const Rect& bounds);

// Same, without a bounds check.
DamageRegion normalize_unchecked(std::span<const Rect> rects);

}  // namespace rfbkit
