#include "rfbkit/model/region.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "rfbkit/model/error.hpp"

namespace rfbkit {

DamageRegion normalize_unchecked(std::span<const Rect> rects) {
  std::vector<int> edges;
  edges.reserve(rects.size() * 2);
  for (const Rect& r : rects) {
    if (r.empty()) continue;
    edges.push_back(r.y);
    edges.push_back(r.bottom());
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Rect> out;
  // Index into `out` of the rect ending at the current band top, keyed by x-extent.
  std::map<std::pair<int, int>, std::size_t> open;
  std::vector<std::pair<int, int>> runs;

  for (std::size_t band = 0; band + 1 < edges.size(); ++band) {
    const int top = edges[band];
    const int bottom = edges[band + 1];
    runs.clear();
    for (const Rect& r : rects) {
      if (!r.empty() && r.y <= top && r.bottom() >= bottom) runs.emplace_back(r.x, r.right());
    }
    std::sort(runs.begin(), runs.end());
    std::vector<std::pair<int, int>> merged;
    for (auto run : runs) {
      if (!merged.empty() && run.first <= merged.back().second) {
        merged.back().second = std::max(merged.back().second, run.second);
      } else {
        merged.push_back(run);
      }
    }

    std::map<std::pair<int, int>, std::size_t> next_open;
    for (auto run : merged) {
      auto it = open.find(run);
      if (it != open.end() && out[it->second].bottom() == top) {
        out[it->second].h += bottom - top;
        next_open.emplace(run, it->second);
      } else {
        out.push_back({run.first, top, run.second - run.first, bottom - top});
        next_open.emplace(run, out.size() - 1);
      }
    }
    open = std::move(next_open);
  }

  std::sort(out.begin(), out.end(), [](const Rect& a, const Rect& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  DamageRegion region;
  region.rects_ = std::move(out);
  return region;
}

DamageRegion region_normalize(std::span<const Rect> rects, const Rect& bounds) {
  for (const Rect& r : rects) {
    if (!r.empty() && !bounds.contains(r)) {
      std::ostringstream os;
      os << "rect " << r << " lies outside " << bounds;
      throw BoundsError(os.str());
    }
  }
  return normalize_unchecked(rects);
}

std::int64_t DamageRegion::pixel_count() const {
  std::int64_t n = 0;
  for (const Rect& r : rects_) n += r.area();
  return n;
}

bool DamageRegion::covers(int x, int y) const {
  return std::any_of(rects_.begin(), rects_.end(), [&](const Rect& r) { return r.contains(x, y); });
}

Rect DamageRegion::bounding_box() const {
  Rect box;
  for (const Rect& r : rects_) box = box.bounding_union(r);
  return box;
}

void DamageRegion::add(const Rect& r) {
  if (r.empty()) return;
  std::vector<Rect> all = rects_;
  all.push_back(r);
  *this = normalize_unchecked(all);
}

void DamageRegion::add(const DamageRegion& other) {
  if (other.empty()) return;
  std::vector<Rect> all = rects_;
  all.insert(all.end(), other.rects_.begin(), other.rects_.end());
  *this = normalize_unchecked(all);
}

void DamageRegion::subtract(const Rect& cut) {
  if (cut.empty() || rects_.empty()) return;
  std::vector<Rect> pieces;
  for (const Rect& r : rects_) {
    const Rect i = r.intersect(cut);
    if (i.empty()) {
      pieces.push_back(r);
      continue;
    }
    pieces.push_back({r.x, r.y, r.w, i.y - r.y});                       // above
    pieces.push_back({r.x, i.bottom(), r.w, r.bottom() - i.bottom()});   // below
    pieces.push_back({r.x, i.y, i.x - r.x, i.h});                        // left
    pieces.push_back({i.right(), i.y, r.right() - i.right(), i.h});      // right
  }
  *this = normalize_unchecked(pieces);
}

DamageRegion DamageRegion::clipped(const Rect& clip) const {
  std::vector<Rect> pieces;
  for (const Rect& r : rects_) pieces.push_back(r.intersect(clip));
  return normalize_unchecked(pieces);
}

}  // namespace rfbkit
