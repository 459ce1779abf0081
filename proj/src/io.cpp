#include "lattice_tda/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <fstream>
#include <memory>
#include <sstream>

#include "lattice_tda/error.hpp"

namespace ltda::io {

std::string format_double(double v) {
  if (!std::isfinite(v)) {
    throw Error(Errc::internal_consistency,
                "non-finite value cannot be serialized");
  }
  return fmt::format("{:.17g}", v);
}

namespace {

void dump_into(const json& v, int indent, int depth, std::string& out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Short numeric tuples such as [birth, death] stay on one line.
      const bool flat =
          v.size() <= 2 && std::all_of(v.begin(), v.end(), [](const json& e) {
            return e.is_number();
          });
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat && pretty ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_into(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += pretty ? ": " : ":";
        dump_into(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(v)) {
    throw Error(Errc::parse, fmt::format("line {}: '{}' is not a finite number",
                                         line_no, field));
  }
  return v;
}

// Calls row(fields, line_no) for each data line after a header that must
// start with the given columns.
template <class Row>
void for_each_csv_row(std::string_view text,
                      std::initializer_list<std::string_view> header,
                      Row&& row) {
  std::size_t line_no = 0;
  bool seen_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (!seen_header) {
      std::size_t k = 0;
      for (std::string_view col : header) {
        if (k >= fields.size() || fields[k] != col) {
          throw Error(Errc::parse,
                      fmt::format("line {}: expected header starting with '{}'",
                                  line_no, fmt::join(header, ",")));
        }
        ++k;
      }
      seen_header = true;
      continue;
    }
    if (fields.size() < header.size()) {
      throw Error(Errc::parse, fmt::format("line {}: expected {} columns, got {}",
                                           line_no, header.size(),
                                           fields.size()));
    }
    row(fields, line_no);
  }
  if (!seen_header) throw Error(Errc::parse, "empty CSV: missing header");
}

json point_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(Errc::parse, "expected a point [x, y], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(Errc::parse, fmt::format("missing key '{}'", key));
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, fmt::format("key '{}': {}", key, e.what()));
  }
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string dump_json(const json& value, int indent) {
  std::string out;
  dump_into(value, indent, 0, out);
  if (indent >= 0) out += '\n';
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::format, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::format, "cannot write '" + path.string() + "'");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::format, "write failed for '" + path.string() + "'");
}

// ---- point clouds -------------------------------------------------------

PointCloud parse_cloud_csv(std::string_view text, Unit unit) {
  std::vector<Point2> pts;
  for_each_csv_row(text, {"x", "y"}, [&](const auto& f, std::size_t line) {
    pts.push_back({parse_number(f[0], line), parse_number(f[1], line)});
  });
  if (pts.empty()) throw Error(Errc::parse, "CSV contains no points");
  return PointCloud(std::move(pts), unit);
}

std::string cloud_to_csv(const PointCloud& cloud) {
  std::string out = "x,y\n";
  for (const Point2& p : cloud.points()) {
    out += format_double(p.x);
    out += ',';
    out += format_double(p.y);
    out += '\n';
  }
  return out;
}

PointCloud cloud_from_json(const json& j) {
  const Unit unit = parse_unit(required<std::string>(j, "unit"));
  const json arr = required<json>(j, "points");
  if (!arr.is_array()) throw Error(Errc::parse, "'points' must be an array");
  std::vector<Point2> pts;
  for (const json& e : arr) pts.push_back(point_from_json(e));
  if (pts.empty()) throw Error(Errc::parse, "'points' is empty");
  return PointCloud(std::move(pts), unit);
}

json cloud_to_json(const PointCloud& cloud) {
  json pts = json::array();
  for (const Point2& p : cloud.points()) pts.push_back(point_json(p));
  return {{"unit", std::string(unit_name(cloud.unit()))}, {"points", pts}};
}

namespace {

json parse_json_text(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, what + ": " + e.what());
  }
}

}  // namespace

PointCloud load_cloud(const std::filesystem::path& path, Unit csv_unit) {
  const std::string text = read_text_file(path);
  try {
    if (path.extension() == ".json") {
      return cloud_from_json(parse_json_text(text, path.string()));
    }
    return parse_cloud_csv(text, csv_unit);
  } catch (const Error& e) {
    if (e.code() != Errc::parse) throw;
    throw Error(Errc::parse, path.string() + ": " + e.what());
  }
}

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  write_text_file(path, path.extension() == ".json"
                            ? dump_json(cloud_to_json(cloud))
                            : cloud_to_csv(cloud));
}

// ---- diagrams -----------------------------------------------------------

json diagram_to_json(const PersistenceDiagram& diagram) {
  json h0 = json::array();
  for (const auto& p : diagram.h0) h0.push_back(json::array({0, p.death}));
  json h1 = json::array();
  for (const auto& p : diagram.h1) h1.push_back(json::array({p.birth, p.death}));
  return {{"threshold", diagram.threshold},
          {"h0", h0},
          {"h0_infinite", diagram.h0_infinite},
          {"h1", h1}};
}

PersistenceDiagram diagram_from_json(const json& j) {
  PersistenceDiagram d;
  d.threshold = required<double>(j, "threshold");
  d.h0_infinite = required<int>(j, "h0_infinite");
  if (d.h0_infinite < 0) throw Error(Errc::parse, "'h0_infinite' is negative");
  for (const json& e : required<json>(j, "h0")) {
    const Point2 p = point_from_json(e);
    if (p.x != 0.0 || p.y < 0.0) {
      throw Error(Errc::parse, "0D pairs must be [0, death >= 0]");
    }
    d.h0.push_back({0, 0.0, p.y});
  }
  for (const json& e : required<json>(j, "h1")) {
    const Point2 p = point_from_json(e);
    if (p.y < p.x) throw Error(Errc::parse, "1D pair with death < birth");
    d.h1.push_back({1, p.x, p.y});
  }
  return d;
}

// ---- score reports ------------------------------------------------------

json score_report_json(const OrderScores& s, const Interpretation& r) {
  return {{"n", s.n},
          {"h0_var", s.h0_var},
          {"h0_bar", s.h0_bar},
          {"h1_sum", s.h1_sum},
          {"h1_bar", s.h1_bar},
          {"percent_square", optional_number(r.percent_square)},
          {"percent_hexagonal", optional_number(r.percent_hexagonal)},
          {"category", r.category},
          {"summary", r.summary}};
}

std::string score_csv_header() {
  return "n,h0_var,h0_bar,h1_sum,h1_bar,percent_square,percent_hexagonal,"
         "category,summary";
}

std::string score_csv_row(const OrderScores& s, const Interpretation& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  // The summary contains a comma.
  return fmt::format("{},{},{},{},{},{},{},{},\"{}\"", s.n,
                     format_double(s.h0_var), format_double(s.h0_bar),
                     format_double(s.h1_sum), format_double(s.h1_bar),
                     opt(r.percent_square), opt(r.percent_hexagonal),
                     r.category, r.summary);
}

// ---- imaging files ------------------------------------------------------

std::vector<Point2> parse_seeds_csv(std::string_view text) {
  std::vector<Point2> seeds;
  for_each_csv_row(text, {"x", "y"}, [&](const auto& f, std::size_t line) {
    seeds.push_back({parse_number(f[0], line), parse_number(f[1], line)});
  });
  if (seeds.empty()) throw Error(Errc::parse, "seed file contains no seeds");
  return seeds;
}

std::string centers_to_csv(const CenterSet& centers) {
  std::string out = "x,y,region_px\n";
  for (std::size_t i = 0; i < centers.centers.size(); ++i) {
    out += fmt::format("{},{},{}\n", format_double(centers.centers[i].x),
                       format_double(centers.centers[i].y),
                       centers.region_sizes[i]);
  }
  return out;
}

json match_report_json(const MatchReport& report) {
  json matched = json::array();
  for (const auto& m : report.matched) {
    matched.push_back({{"nominal", point_json(m.nominal)},
                       {"true", point_json(m.truth)},
                       {"dx", m.dx},
                       {"dy", m.dy}});
  }
  json missed = json::array();
  for (const auto& p : report.missed) missed.push_back(point_json(p));
  json extra = json::array();
  for (const auto& p : report.extra) extra.push_back(point_json(p));
  return {{"matched", matched}, {"missed", missed}, {"extra", extra}};
}

NominalGridSpec nominal_spec_from_json(const json& j) {
  NominalGridSpec spec;
  spec.rows = required<int>(j, "rows");
  spec.cols = required<int>(j, "cols");
  spec.datum = point_from_json(required<json>(j, "datum"));
  spec.unit = j.contains("unit") ? parse_unit(required<std::string>(j, "unit"))
                                 : Unit::pixels;
  if (j.contains("pitch_x") || j.contains("pitch_y")) {
    spec.pitch_x = required<double>(j, "pitch_x");
    spec.pitch_y = required<double>(j, "pitch_y");
  } else {
    // Pitch from process parameters: (scan speed / strike frequency) in um,
    // converted to pixels.
    const double pitch = nominal_pitch_px(required<double>(j, "speed_um_s"),
                                          required<double>(j, "freq_hz"),
                                          required<double>(j, "um_per_px"));
    spec.pitch_x = spec.pitch_y = pitch;
  }
  return spec;
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : b_(bytes) {}

  std::string_view token() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < b_.size() && !std::isspace(static_cast<unsigned char>(b_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) throw Error(Errc::format, "PGM header is truncated");
    return b_.substr(start, pos_ - start);
  }

  int integer() {
    const auto t = token();
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || v <= 0) {
      throw Error(Errc::format, fmt::format("bad PGM header field '{}'", t));
    }
    return v;
  }

  std::string_view payload() {
    // Exactly one whitespace byte separates maxval from the raster.
    if (pos_ >= b_.size()) throw Error(Errc::format, "PGM has no raster data");
    return b_.substr(pos_ + 1);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(b_[pos_]))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::string_view b_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
  PgmReader reader(bytes);
  if (reader.token() != "P5") {
    throw Error(Errc::format, "not a binary PGM (P5) file");
  }
  const int w = reader.integer();
  const int h = reader.integer();
  const int maxval = reader.integer();
  if (maxval > 255) {
    throw Error(Errc::format,
                fmt::format("PGM maxval {} is not 8-bit", maxval));
  }
  const auto data = reader.payload();
  const std::size_t need = static_cast<std::size_t>(w) * h;
  if (data.size() < need) {
    throw Error(Errc::format, fmt::format("PGM raster truncated: {} of {} bytes",
                                          data.size(), need));
  }
  GrayImage img(w, h);
  std::copy(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(need),
            img.pixels.begin());
  return img;
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = fmt::format("P5\n{} {}\n255\n", image.width, image.height);
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

GrayImage read_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw Error(Errc::format, fmt::format("{}: {}", path.string(), png.message));
  }
  if (png.format & PNG_FORMAT_FLAG_LINEAR ||
      PNG_IMAGE_SAMPLE_COMPONENT_SIZE(png.format) != 1) {
    png_image_free(&png);
    throw Error(Errc::format, path.string() + ": only 8-bit PNG is supported");
  }
  const bool is_color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = is_color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(Errc::format, fmt::format("{}: {}", path.string(), msg));
  }
  const int w = static_cast<int>(png.width);
  const int h = static_cast<int>(png.height);
  if (is_color) return to_grayscale(RgbImage{w, h, 8, std::move(buf)});
  GrayImage img(w, h);
  img.pixels = std::move(buf);
  return img;
}

void write_png(const std::filesystem::path& path, const GrayImage& image) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.pixels.data(), 0,
                               nullptr)) {
    throw Error(Errc::format, fmt::format("{}: {}", path.string(), png.message));
  }
}

GrayImage load_image(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm") return parse_pgm(read_text_file(path));
  throw Error(Errc::format,
              path.string() + ": unsupported image type (need .pgm or .png)");
}

}  // namespace ltda::io
