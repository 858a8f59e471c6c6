#ifndef TOEPLITZ_IO_HPP
#define TOEPLITZ_IO_HPP

// Sequence files, manifests, CSV export of clouds and paths, and SVG figures.
//
// Sequence file:
//   #TPZ1 {manifest json on one line}
//   0120...   (digits, 4096 per line, omega(1) first)

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <unistd.h>
#include <utility>
#include <vector>

#include "toeplitz/arith.hpp"
#include "toeplitz/blocks.hpp"
#include "toeplitz/interior.hpp"
#include "toeplitz/report.hpp"
#include "toeplitz/rotation.hpp"
#include "toeplitz/segment.hpp"
#include "toeplitz/separator.hpp"
#include "toeplitz/sequence.hpp"

namespace toeplitz {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kGeneratorVersion = "tpz 1.0.0";
inline constexpr std::size_t kLineWidth = 4096;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes via a temporary sibling file and rename, so readers never observe a
/// partially written file.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Manifests

inline json base_manifest(const std::string& construction, json params, const BlockSchedule& S, int levels,
                          std::uint64_t horizon, json seeds = json::object()) {
  json m;
  m["format_version"] = kFormatVersion;
  m["construction"] = construction;
  m["params"] = std::move(params);
  m["schedule"] = S.to_json();
  json lv = json::array();
  for (int n = 1; n <= levels; ++n) lv.push_back(to_string(S.a(n)));
  m["materialized_levels"] = lv;
  m["generator_version"] = kGeneratorVersion;
  m["seeds"] = std::move(seeds);
  m["horizon"] = horizon;
  return m;
}

/// Levels n whose [1, a_n] lies within the horizon.
inline int levels_within(const BlockSchedule& S, std::uint64_t horizon) {
  int n = 0;
  while (n + 1 <= S.max_level() && S.a64(n + 1) <= horizon) ++n;
  return n;
}

inline json segment_manifest(const SegmentSequence& s) {
  json p = s.params.to_json();
  json ends = json::array();
  for (int k = 1; k <= s.complete_levels && k < static_cast<int>(s.level_end_displacement.size()); ++k)
    ends.push_back(s.level_end_displacement[static_cast<std::size_t>(k)]);
  p["level_end_displacement_scaled"] = ends;
  return base_manifest("segment", std::move(p), s.params.schedule, s.complete_levels, s.sequence.horizon());
}

inline json separator_manifest(const SeparatorSequence& seq, std::uint64_t length) {
  json p = seq.params().to_json();
  json dec = json::array();
  const int levels = levels_within(seq.schedule(), length);
  for (int n = 1; n <= std::max(levels, 1); ++n) {
    const auto& D = seq.decomposition(n);
    dec.push_back({{"level", n}, {"p", to_string(D.p)}, {"q", to_string(D.q)}});
  }
  p["p_q"] = dec;
  return base_manifest("separator", std::move(p), seq.schedule(), levels, length);
}

inline json interior_manifest(const InteriorSequence& s) {
  json p = s.params.to_json();
  json targets = json::array();
  for (const auto& t : s.targets) targets.push_back(t.to_json());
  p["targets"] = targets;
  return base_manifest("interior", std::move(p), s.params.schedule, s.levels, s.sequence.horizon(),
                       {{"target_seed", s.params.target_seed}});
}

// ---------------------------------------------------------------------------
// Sequence files

struct SequenceFile {
  json manifest;
  MaterializedSequence body;
};

inline std::string render_sequence_file(const json& manifest, const MaterializedSequence& body) {
  std::string out = "#TPZ1 " + manifest.dump() + "\n";
  const auto& sym = body.symbols();
  out.reserve(out.size() + sym.size() + sym.size() / kLineWidth + 1);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    out.push_back(static_cast<char>('0' + sym[i]));
    if ((i + 1) % kLineWidth == 0 || i + 1 == sym.size()) out.push_back('\n');
  }
  return out;
}

inline void write_sequence_file(const std::filesystem::path& path, const json& manifest,
                                const MaterializedSequence& body) {
  if (manifest.at("horizon").get<std::uint64_t>() != body.horizon())
    throw std::invalid_argument("manifest horizon differs from body length");
  write_atomically(path, render_sequence_file(manifest, body));
}

inline SequenceFile parse_sequence_file(const std::string& text) {
  static constexpr std::string_view magic = "#TPZ1 ";
  if (text.compare(0, magic.size(), magic) != 0) throw FormatError("missing #TPZ1 header");
  const auto eol = text.find('\n');
  if (eol == std::string::npos) throw FormatError("header line is not terminated");
  SequenceFile f;
  try {
    f.manifest = json::parse(text.substr(magic.size(), eol - magic.size()));
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (f.manifest.value("format_version", 0) != kFormatVersion) throw FormatError("unsupported format_version");
  std::vector<Symbol> sym;
  sym.reserve(text.size() - eol);
  for (std::size_t i = eol + 1; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '\n' || ch == '\r') continue;
    if (ch < '0' || ch > '2') throw FormatError("body contains a character outside {0,1,2} at offset " + std::to_string(i));
    sym.push_back(static_cast<Symbol>(ch - '0'));
  }
  const auto horizon = f.manifest.at("horizon").get<std::uint64_t>();
  if (sym.size() != horizon)
    throw FormatError("body length " + std::to_string(sym.size()) + " differs from manifest horizon " +
                      std::to_string(horizon));
  f.body = MaterializedSequence(std::move(sym));
  return f;
}

inline SequenceFile read_sequence_file(const std::filesystem::path& path) {
  return parse_sequence_file(read_file(path));
}

// Re-derivation of the constructions from a manifest.

inline SegmentParams segment_params_from(const json& m) {
  const auto& p = m.at("params");
  const Rational vx = parse_rational(p.at("v").at(0).get<std::string>());
  const Rational vy = parse_rational(p.at("v").at(1).get<std::string>());
  const BlockSchedule S = BlockSchedule::from_json(m.at("schedule"));
  return derive_segment_params(vx, vy, to_u64(S.a(1)), S.max_level());
}

inline SeparatorParams separator_params_from(const json& m) {
  const auto& p = m.at("params");
  const BlockSchedule S = BlockSchedule::from_json(m.at("schedule"));
  return make_separator_params(p.at("K").get<std::uint64_t>(), p.at("L").get<std::uint64_t>(),
                               LevelRule::from_json(m.at("schedule").at("d")), p.value("toy_mode", false),
                               S.max_level());
}

inline InteriorParams interior_params_from(const json& m) {
  const BlockSchedule S = BlockSchedule::from_json(m.at("schedule"));
  return make_interior_params(S.a(1), LevelRule::from_json(m.at("schedule").at("d")),
                              m.at("params").value("target_seed", std::uint64_t{0}), S.max_level());
}

// ---------------------------------------------------------------------------
// CSV of rotation vectors: start_index,x_num,x_den,y_num,y_den, optionally
// followed by a "# {json}" footer line.

inline void append_csv_row(std::string& out, std::uint64_t start, const RotationVector& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const Rational x = r.rx(), y = r.ry();
  out += std::to_string(start);
  for (const Rational* q : {&x, &y}) {
    out += ',';
    out += numerator(*q).str();
    out += ',';
    out += denominator(*q).str();
  }
  out += '\n';
}

inline std::string render_csv(const std::vector<std::pair<std::uint64_t, RotationVector>>& rows,
                              const json* footer = nullptr) {
  std::string out = "start_index,x_num,x_den,y_num,y_den\n";
  out.reserve(rows.size() * 32);
  for (const auto& [i, r] : rows) append_csv_row(out, i, r);
  if (footer) out += "# " + footer->dump() + "\n";
  return out;
}

struct CsvCloud {
  std::vector<std::pair<std::uint64_t, Point2>> rows;
  json footer;  // null when absent
};

inline CsvCloud parse_csv(const std::string& text) {
  CsvCloud c;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      c.footer = json::parse(line.substr(2));
      continue;
    }
    if (!header) {
      if (line != "start_index,x_num,x_den,y_num,y_den") throw FormatError("unexpected CSV header: " + line);
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw FormatError("CSV row needs 5 columns: " + line);
    try {
      c.rows.emplace_back(std::stoull(f[0]), Point2{parse_rational(f[1] + "/" + f[2]), parse_rational(f[3] + "/" + f[4])});
    } catch (const std::exception& e) {
      throw FormatError("bad CSV row '" + line + "': " + e.what());
    }
  }
  if (!header) throw FormatError("CSV has no header");
  return c;
}

// ---------------------------------------------------------------------------
// SVG: the simplex, T, the band S (a stroke of width 1/4 with round caps and
// joins along T is exactly the closed 1/8-neighbourhood), and one marker per point.

inline std::string render_svg(const std::vector<Point2>& pts, bool polyline = false) {
  constexpr double size = 600, pad = 0.2;
  auto X = [&](double x) { return (x + pad) / (1 + 2 * pad) * size; };
  auto Y = [&](double y) { return size - (y + pad) / (1 + 2 * pad) * size; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  const double unit = size / (1 + 2 * pad);
  const std::string tri = num(X(0)) + "," + num(Y(0)) + " " + num(X(1)) + "," + num(Y(0)) + " " + num(X(0)) +
                          "," + num(Y(1));
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(size) + "\" height=\"" + num(size) +
       "\" viewBox=\"0 0 " + num(size) + " " + num(size) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<polygon id=\"S\" points=\"" + tri + "\" fill=\"none\" stroke=\"#cfe3f7\" stroke-width=\"" +
       num(unit / 4) + "\" stroke-linejoin=\"round\" stroke-linecap=\"round\"/>\n";
  s += "<polygon id=\"T\" points=\"" + tri + "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  if (polyline && pts.size() > 1) {
    s += "<polyline fill=\"none\" stroke=\"#c33\" stroke-width=\"0.5\" points=\"";
    for (const auto& p : pts) s += num(X(to_double(p.x))) + "," + num(Y(to_double(p.y))) + " ";
    s += "\"/>\n";
  }
  s += "<g id=\"markers\" fill=\"#c33\">\n";
  for (const auto& p : pts)
    s += "<circle cx=\"" + num(X(to_double(p.x))) + "\" cy=\"" + num(Y(to_double(p.y))) + "\" r=\"1.2\"/>\n";
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace toeplitz

#endif  // TOEPLITZ_IO_HPP
