#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>

namespace rfbkit {

// Axis-aligned rectangle, top-left origin.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  constexpr int right() const { return x + w; }
  constexpr int bottom() const { return y + h; }
  constexpr bool empty() const { return w <= 0 || h <= 0; }
  constexpr std::int64_t area() const { return empty() ? 0 : std::int64_t{w} * h; }

  constexpr bool contains(int px, int py) const {
    return px >= x && py >= y && px < right() && py < bottom();
  }
  constexpr bool contains(const Rect& r) const {
    return r.x >= x && r.y >= y && r.right() <= right() && r.bottom() <= bottom();
  }

  constexpr Rect intersect(const Rect& r) const {
    const int l = std::max(x, r.x);
    const int t = std::max(y, r.y);
    const int rr = std::min(right(), r.right());
    const int b = std::min(bottom(), r.bottom());
    if (rr <= l || b <= t) return {};
    return {l, t, rr - l, b - t};
  }

  // Smallest rectangle containing both; an empty operand is ignored.
  constexpr Rect bounding_union(const Rect& r) const {
    if (empty()) return r;
    if (r.empty()) return *this;
    const int l = std::min(x, r.x);
    const int t = std::min(y, r.y);
    return {l, t, std::max(right(), r.right()) - l, std::max(bottom(), r.bottom()) - t};
  }

  // Valid as a rectangle header on the wire: non-empty, inside the 16-bit space.
  constexpr bool wire_valid() const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && right() <= 0xFFFF && bottom() <= 0xFFFF;
  }

  constexpr bool operator==(const Rect&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const Rect& r) {
  return os << '(' << r.x << ',' << r.y << ' ' << r.w << 'x' << r.h << ')';
}

}  // namespace rfbkit
