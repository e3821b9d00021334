#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfbkit/model/encoding.hpp"
#include "rfbkit/model/framebuffer.hpp"

namespace rfbkit::codec {

// A decoder test vector: applying `rects` in order, with one fresh zlib
// stream for the whole case, turns `before` into `after`.
struct CorpusCase {
  std::string name;
  Encoding encoding = Encoding::Raw;
  Framebuffer source;  // what the encoder read
  Framebuffer before;
  std::vector<RectUpdate> rects;
  Framebuffer after;  // from the source pixels, not from any decoder
};

struct CorpusOptions {
  std::uint64_t seed = 1;
  std::size_t count = 1000;
  int max_width = 64;
  int max_height = 48;
  int max_rects = 4;
};

// Randomized framebuffers (several pixel formats and content styles) and
// rectangles of any size, encoded with the library's encoders in strict
// mode. Deterministic for a given seed on every platform.
std::vector<CorpusCase> make_corpus(Encoding encoding, const CorpusOptions& options);

// {"encoding": name, "encoding_id": n, "cases": [{"name", "width", "height",
//  "format": {...}, "before": hex, "rects": [{"x","y","w","h","encoding","payload": hex}],
//  "after": hex}]}. Pixels are serialized row-major in the case's format.
std::string corpus_to_json(Encoding encoding, const std::vector<CorpusCase>& cases);

}  // namespace rfbkit::codec
