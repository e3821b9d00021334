// Exports codec test vectors as JSON, one file per encoding, for decoders
// written outside this library.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rfbkit/codec/corpus.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Export golden codec fixtures"};
  std::string out_dir;
  rfbkit::codec::CorpusOptions opts;
  opts.count = 20;
  opts.max_width = 40;
  opts.max_height = 30;
  app.add_option("--out", out_dir, "directory for <encoding>.json")->required();
  app.add_option("--count", opts.count, "cases per encoding")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "corpus seed")->capture_default_str();
  app.add_option("--max-width", opts.max_width)->capture_default_str()->check(CLI::Range(1, 4096));
  app.add_option("--max-height", opts.max_height)->capture_default_str()->check(CLI::Range(1, 4096));
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out_dir);
    using rfbkit::Encoding;
    for (Encoding e : {Encoding::Raw, Encoding::CopyRect, Encoding::RRE, Encoding::Hextile, Encoding::Zlib}) {
      const auto path = std::filesystem::path(out_dir) / (std::string(rfbkit::encoding_name(e)) + ".json");
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << rfbkit::codec::corpus_to_json(e, rfbkit::codec::make_corpus(e, opts));
      std::cerr << "fixtures: wrote " << path.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "fixtures: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
