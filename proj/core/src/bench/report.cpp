#include "rfbkit/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rfbkit/accel/metrics_tap.hpp"
#include "rfbkit/model/error.hpp"

namespace rfbkit::bench {
namespace {

constexpr double kRatioTolerance = 0.005;
constexpr double kMegabyte = 1e6;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void check_ratio(const std::string& encoding, double captured, double compressed, double stored) {
  const double recomputed = compressed > 0 ? captured / compressed : 1.0;
  if (std::abs(recomputed - stored) > kRatioTolerance) {
    throw ConsistencyError(encoding + ": stored ratio " + fmt("%.4f", stored) + " but captured/compressed is " +
                           fmt("%.4f", recomputed));
  }
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

const EncodingSummary* find(const std::vector<EncodingSummary>& agg, Encoding e) {
  auto it = std::find_if(agg.begin(), agg.end(), [&](const auto& s) { return s.encoding == e; });
  return it == agg.end() ? nullptr : &*it;
}

}  // namespace

std::string render_report(const BenchmarkReport& report, ReportFormat format) {
  for (const auto& row : report.rows) {
    const auto& m = row.metrics;
    check_ratio(m.encoding, static_cast<double>(m.captured_bytes), static_cast<double>(m.compressed_bytes),
                m.compression_ratio);
  }
  if (format == ReportFormat::Csv) {
    std::string out = accel::metrics_csv_header() + "\n";
    for (const auto& row : report.rows) out += accel::metrics_csv_row(row.metrics) + "\n";
    return out;
  }

  const auto agg = report.aggregate.empty() ? aggregate_rows(report.rows) : report.aggregate;
  for (const auto& s : agg) {
    check_ratio(std::string(encoding_name(s.encoding)), s.captured_bytes, s.compressed_bytes, s.compression_ratio);
  }
  std::ostringstream os;
  char line[128];
  auto row = [&](const char* label, auto cell) {
    std::snprintf(line, sizeof line, "%-22s", label);
    os << line;
    for (const auto& s : agg) {
      std::snprintf(line, sizeof line, "%12s", cell(s).c_str());
      os << line;
    }
    os << '\n';
  };
  row("", [](const EncodingSummary& s) { return std::string(encoding_name(s.encoding)); });
  row("Updates", [](const EncodingSummary& s) { return fmt("%.0f", s.updates); });
  row("Updates/second", [](const EncodingSummary& s) { return fmt("%.2f", s.updates_per_second); });
  row("Rectangles received", [](const EncodingSummary& s) { return fmt("%.0f", s.rectangles); });
  row("Data captured (MB)", [](const EncodingSummary& s) { return fmt("%.2f", s.captured_bytes / kMegabyte); });
  row("Data compressed (MB)", [](const EncodingSummary& s) { return fmt("%.2f", s.compressed_bytes / kMegabyte); });
  row("Compression ratio", [](const EncodingSummary& s) { return fmt("%.2f", s.compression_ratio); });
  os << '\n';
  row("Duration (s)", [](const EncodingSummary& s) { return fmt("%.2f", s.duration_s); });
  row("Runs", [](const EncodingSummary& s) { return fmt("%.0f", s.runs); });

  if (!report.verdicts.empty()) os << '\n';
  for (const auto& v : report.verdicts) {
    os << (v.pass ? "PASS  " : "FAIL  ") << v.name;
    if (!v.detail.empty()) os << "  (" << v.detail << ')';
    os << '\n';
  }
  for (const auto& f : report.failures) {
    os << "FAILED RUN  " << encoding_name(f.encoding) << " #" << f.repetition << ": " << f.reason << '\n';
  }
  return os.str();
}

std::vector<SessionMetrics> parse_metrics_csv(std::string_view csv) {
  std::vector<SessionMetrics> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < csv.size()) {
    auto end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != accel::metrics_csv_header()) throw FramingError("metrics csv: unexpected header");
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw FramingError("metrics csv line " + std::to_string(line_no) + ": expected 8 fields");
    try {
      SessionMetrics m;
      m.encoding = f[0];
      m.updates = std::stoull(f[1]);
      m.duration_s = std::stod(f[2]);
      m.updates_per_second = std::stod(f[3]);
      m.rectangles = std::stoull(f[4]);
      m.captured_bytes = std::stoull(f[5]);
      m.compressed_bytes = std::stoull(f[6]);
      m.compression_ratio = std::stod(f[7]);
      out.push_back(std::move(m));
    } catch (const std::logic_error&) {
      throw FramingError("metrics csv line " + std::to_string(line_no) + ": bad number");
    }
  }
  return out;
}

std::vector<Verdict> compare_encodings(const std::vector<EncodingSummary>& agg) {
  if (agg.size() < 2) throw PreconditionError("comparison needs at least two encodings");
  std::vector<Verdict> out;

  const EncodingSummary* raw = find(agg, Encoding::Raw);
  const EncodingSummary* hex = find(agg, Encoding::Hextile);
  const EncodingSummary* zl = find(agg, Encoding::Zlib);
  std::vector<const EncodingSummary*> chain;
  for (const auto* s : {raw, hex, zl}) {
    if (s) chain.push_back(s);
  }

  {
    Verdict v{"ratio ordering zlib > hextile > raw", true, {}};
    for (std::size_t i = 1; i < chain.size(); ++i) {
      if (!(chain[i]->compression_ratio > chain[i - 1]->compression_ratio)) v.pass = false;
    }
    for (const auto* s : chain) {
      if (!v.detail.empty()) v.detail += ", ";
      v.detail += std::string(encoding_name(s->encoding)) + " " + fmt("%.2f", s->compression_ratio);
    }
    if (chain.size() < 2) v.detail = "not applicable";
    out.push_back(v);
  }
  {
    Verdict v{"updates/s non-decreasing with ratio", true, {}};
    auto sorted = chain;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto* a, const auto* b) { return a->compression_ratio < b->compression_ratio; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i]->updates_per_second < sorted[i - 1]->updates_per_second) v.pass = false;
    }
    for (const auto* s : sorted) {
      if (!v.detail.empty()) v.detail += ", ";
      v.detail += std::string(encoding_name(s->encoding)) + " " + fmt("%.2f", s->updates_per_second) + "/s";
    }
    if (sorted.size() < 2) v.detail = "not applicable";
    out.push_back(v);
  }
  {
    Verdict v{"raw ratio = 1", true, "not applicable"};
    if (raw) {
      v.pass = raw->compression_ratio == 1.0 && raw->captured_bytes == raw->compressed_bytes;
      v.detail = v.pass ? "1.00" : "raw ratio != 1 (" + fmt("%.2f", raw->compression_ratio) + ")";
    }
    out.push_back(v);
  }
  return out;
}

std::vector<Verdict> compare_encodings(const BenchmarkReport& report) {
  return compare_encodings(report.aggregate.empty() ? aggregate_rows(report.rows) : report.aggregate);
}

}  // namespace rfbkit::bench
