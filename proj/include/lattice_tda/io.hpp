#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "lattice_tda/imaging.hpp"
#include "lattice_tda/lattice.hpp"
#include "lattice_tda/persistence.hpp"
#include "lattice_tda/scores.hpp"

namespace ltda::io {

// Keys keep insertion order.
using json = nlohmann::ordered_json;

// 17 significant digits; round-trips every double exactly.
std::string format_double(double v);

// Serializes like json::dump but with format_double for floating values.
// indent < 0 gives a single line.
std::string dump_json(const json& value, int indent = 2);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// ---- point clouds -------------------------------------------------------
// CSV: header starting with "x,y" (further columns ignored), one point per
// row. JSON: {"unit": ..., "points": [[x, y], ...]}.

PointCloud parse_cloud_csv(std::string_view text, Unit unit = Unit::normalized);
std::string cloud_to_csv(const PointCloud& cloud);
PointCloud cloud_from_json(const json& j);
json cloud_to_json(const PointCloud& cloud);
// Dispatches on the extension (.json, otherwise CSV).
PointCloud load_cloud(const std::filesystem::path& path,
                      Unit csv_unit = Unit::normalized);
void save_cloud(const std::filesystem::path& path, const PointCloud& cloud);

// ---- diagrams -----------------------------------------------------------
// {"threshold": t, "h0": [[0, death], ...], "h0_infinite": k,
//  "h1": [[birth, death], ...]}

json diagram_to_json(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_json(const json& j);

// ---- score reports ------------------------------------------------------

json score_report_json(const OrderScores& scores, const Interpretation& reading);
std::string score_csv_header();
// One CSV row (no trailing newline) with the same columns as the JSON report.
std::string score_csv_row(const OrderScores& scores,
                          const Interpretation& reading);

// ---- imaging files ------------------------------------------------------

std::vector<Point2> parse_seeds_csv(std::string_view text);
std::string centers_to_csv(const CenterSet& centers);
json match_report_json(const MatchReport& report);
NominalGridSpec nominal_spec_from_json(const json& j);

// Binary PGM (P5, maxval <= 255).
GrayImage parse_pgm(std::string_view bytes);
std::string encode_pgm(const GrayImage& image);
// 8-bit gray or RGB(A) PNG; RGB goes through to_grayscale.
GrayImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const GrayImage& image);
// .pgm or .png by extension.
GrayImage load_image(const std::filesystem::path& path);

}  // namespace ltda::io
