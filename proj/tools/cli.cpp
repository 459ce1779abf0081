#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include "lattice_tda/error.hpp"
#include "lattice_tda/imaging.hpp"
#include "lattice_tda/io.hpp"
#include "lattice_tda/lattice.hpp"
#include "lattice_tda/persistence.hpp"
#include "lattice_tda/scores.hpp"
#include "lattice_tda/svg.hpp"

namespace ltda::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

struct GenArgs {
  std::string kind = "square";
  int n = 5;
  int rows = 0;
  int cols = 0;
  double pitch_x = 0.0;
  double pitch_y = 0.0;
  double datum_x = 0.0;
  double datum_y = 0.0;
  std::string unit = "pixels";
  double speed = 0.0;
  double freq = 0.0;
  double um_per_px = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct PersistArgs {
  std::string input;
  std::optional<double> threshold;
  bool no_normalize = false;
  std::string svg;
  std::string out;
};

struct ScoreArgs {
  std::string input;
  std::string batch;
  std::optional<int> n;
  double epsilon_square = InterpretConfig{}.epsilon_square;
  double epsilon_near = InterpretConfig{}.epsilon_near;
  std::string format = "json";
  std::string out;
};

struct ExtractArgs {
  std::string image;
  std::string seeds;
  std::string auto_seeds;
  int tolerance = 25;
  int connectivity = 4;
  std::int64_t max_region = 0;
  int crop_width = 0;
  int crop_height = 0;
  double speed = 0.0;
  double freq = 0.0;
  double um_per_px = 0.0;
  int grid_n = 0;
  std::string out;
};

struct MatchArgs {
  std::string nominal;
  std::string truth;
  std::string unit = "pixels";
  std::optional<double> max_dist;
  std::string out;
};

struct PipelineArgs {
  std::string image;
  std::string cloud;
  std::string nominal;
  std::optional<double> threshold;
  std::optional<int> n;
  double epsilon_square = InterpretConfig{}.epsilon_square;
  double epsilon_near = InterpretConfig{}.epsilon_near;
  std::optional<double> max_dist;
  std::string out_dir;
};

[[noreturn]] void usage_error(const std::string& msg) {
  throw Error(Errc::invalid_parameter, msg);
}

void require_path(const std::string& value, const char* flag) {
  if (value.empty()) usage_error(fmt::format("{} is required", flag));
}

void require_readable(const std::string& path, const char* flag) {
  require_path(path, flag);
  if (!fs::is_regular_file(path)) {
    throw Error(Errc::format, fmt::format("{}: '{}' does not exist", flag, path));
  }
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, std::string_view text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

// Applies a JSON config to options not given on the command line. Keys are
// long flag names; a nested object under the subcommand's name overrides
// top-level keys.
void apply_config(CLI::App& sub, const std::string& path) {
  if (path.empty()) return;
  require_readable(path, "--config");
  json cfg;
  try {
    cfg = json::parse(io::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, fmt::format("{}: {}", path, e.what()));
  }
  if (!cfg.is_object()) throw Error(Errc::parse, path + ": config must be an object");

  std::map<std::string, json> entries;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (!it.value().is_object()) entries[it.key()] = it.value();
  }
  if (cfg.contains(sub.get_name()) && cfg[sub.get_name()].is_object()) {
    const json& scoped = cfg[sub.get_name()];
    for (auto it = scoped.begin(); it != scoped.end(); ++it) {
      entries[it.key()] = it.value();
    }
  }

  for (const auto& [key, value] : entries) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + flag);
    } catch (const CLI::OptionNotFound&) {
      // Keys for other commands are ignored.
      continue;
    }
    if (opt->count() > 0) continue;  // command line wins
    auto as_text = [](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      return io::dump_json(v, -1);
    };
    if (value.is_array()) {
      for (const auto& e : value) opt->add_result(as_text(e));
    } else {
      opt->add_result(as_text(value));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw Error(Errc::parse,
                  fmt::format("{}: bad value for '{}': {}", path, key, e.what()));
    }
  }
}

// ---- commands ---------------------------------------------------------

int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream&) {
  std::optional<PointCloud> cloud;
  if (a.kind == "square" || a.kind == "hex" || a.kind == "hexagonal") {
    const LatticeKind kind =
        a.kind == "square" ? LatticeKind::square : LatticeKind::hexagonal;
    cloud = gen_lattice({kind, a.n});
  } else if (a.kind == "grid") {
    NominalGridSpec spec;
    spec.rows = a.rows;
    spec.cols = a.cols;
    spec.datum = {a.datum_x, a.datum_y};
    spec.unit = parse_unit(a.unit);
    if (a.pitch_x > 0.0 || a.pitch_y > 0.0) {
      spec.pitch_x = a.pitch_x;
      spec.pitch_y = a.pitch_y > 0.0 ? a.pitch_y : a.pitch_x;
    } else {
      spec.pitch_x = spec.pitch_y = nominal_pitch_px(a.speed, a.freq, a.um_per_px);
    }
    cloud = gen_nominal_grid(spec);
  } else {
    usage_error("--kind must be square, hex or grid");
  }
  if (a.sigma > 0.0) cloud = perturb(*cloud, {a.sigma, a.seed});
  const bool as_json = fs::path(a.out).extension() == ".json";
  emit(a.out, as_json ? io::dump_json(io::cloud_to_json(*cloud))
                      : io::cloud_to_csv(*cloud),
       out);
  return 0;
}

PersistenceDiagram persist_cloud(const PointCloud& raw, bool normalize,
                                 std::optional<double> threshold) {
  if (!normalize) return compute_persistence(raw, threshold);
  return compute_persistence(scale_to_unit_box(raw).first, threshold);
}

void report_truncation(const PersistenceDiagram& d, std::ostream& err) {
  if (d.h0_infinite > 1) {
    err << fmt::format("note: {} components unmerged at threshold {}\n",
                       d.h0_infinite, io::format_double(d.threshold));
  }
  if (d.h1_unpaired > 0) {
    err << fmt::format("note: {} 1-cycles still open at threshold {}\n",
                       d.h1_unpaired, io::format_double(d.threshold));
  }
}

int cmd_persist(const PersistArgs& a, std::ostream& out, std::ostream& err) {
  require_readable(a.input, "--input");
  const PointCloud cloud = io::load_cloud(a.input);
  const PersistenceDiagram d = persist_cloud(cloud, !a.no_normalize, a.threshold);
  report_truncation(d, err);
  if (!a.svg.empty()) {
    io::write_text_file(a.svg, render_diagram_svg(d));
  }
  emit(a.out, io::dump_json(io::diagram_to_json(d)), out);
  return 0;
}

std::pair<OrderScores, Interpretation> score_diagram(
    const PersistenceDiagram& d, std::optional<int> n, double eps_square,
    double eps_near) {
  const OrderScores s = compute_scores(d, n);
  return {s, interpret(s, {eps_square, eps_near})};
}

PersistenceDiagram load_diagram(const fs::path& path) {
  const std::string text = io::read_text_file(path);
  try {
    return io::diagram_from_json(json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, fmt::format("{}: {}", path.string(), e.what()));
  } catch (const Error& e) {
    if (e.code() != Errc::parse) throw;
    throw Error(Errc::parse, fmt::format("{}: {}", path.string(), e.what()));
  }
}

int cmd_score(const ScoreArgs& a, std::ostream& out, std::ostream&) {
  if (a.format != "json" && a.format != "csv") usage_error("--format must be json or csv");
  if (!a.batch.empty()) {
    if (!fs::is_directory(a.batch)) {
      throw Error(Errc::format, fmt::format("--batch: '{}' is not a directory", a.batch));
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(a.batch)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::string csv = "file," + io::score_csv_header() + "\n";
    for (const auto& f : files) {
      const auto [s, r] = score_diagram(load_diagram(f), a.n, a.epsilon_square,
                                        a.epsilon_near);
      csv += f.filename().string() + "," + io::score_csv_row(s, r) + "\n";
    }
    emit(a.out, csv, out);
    return 0;
  }
  require_readable(a.input, "--input");
  const auto [s, r] = score_diagram(load_diagram(a.input), a.n, a.epsilon_square,
                                    a.epsilon_near);
  if (a.format == "csv") {
    emit(a.out, io::score_csv_header() + "\n" + io::score_csv_row(s, r) + "\n", out);
  } else {
    emit(a.out, io::dump_json(io::score_report_json(s, r)), out);
  }
  return 0;
}

CenterSet extract_centers(const ExtractArgs& a, std::ostream& err) {
  require_readable(a.image, "--image");
  if (a.seeds.empty() == a.auto_seeds.empty()) {
    usage_error("give exactly one of --seeds or --auto-seeds");
  }
  if (a.connectivity != 4 && a.connectivity != 8) {
    usage_error("--connectivity must be 4 or 8");
  }
  const bool have_process = a.speed > 0.0 || a.freq > 0.0 || a.um_per_px > 0.0;
  GrayImage image = io::load_image(a.image);

  std::optional<CropSpec> crop;
  if (a.crop_width > 0 || a.crop_height > 0) {
    crop = CropSpec{a.crop_width, a.crop_height > 0 ? a.crop_height : a.crop_width};
  } else if (have_process && a.grid_n > 0) {
    crop = derive_crop(a.um_per_px, a.speed, a.freq, a.grid_n);
  }
  if (crop) image = center_crop(image, *crop);

  RegionGrowParams params;
  if (!a.seeds.empty()) {
    require_readable(a.seeds, "--seeds");
    try {
      params.seeds = io::parse_seeds_csv(io::read_text_file(a.seeds));
    } catch (const Error& e) {
      if (e.code() != Errc::parse) throw;
      throw Error(Errc::parse, a.seeds + ": " + e.what());
    }
  } else {
    require_readable(a.auto_seeds, "--auto-seeds");
    const PointCloud nominal = io::load_cloud(a.auto_seeds, Unit::pixels);
    params.seeds.assign(nominal.points().begin(), nominal.points().end());
  }
  params.tolerance = a.tolerance;
  params.connectivity =
      a.connectivity == 8 ? Connectivity::eight : Connectivity::four;
  params.max_region_px = a.max_region;
  if (params.max_region_px == 0 && have_process) {
    const double pitch = nominal_pitch_px(a.speed, a.freq, a.um_per_px);
    params.max_region_px =
        static_cast<std::int64_t>(std::ceil(4.0 * expected_circle_area_px(pitch)));
  }
  CenterSet centers = region_grow(image, params);
  for (const auto& f : centers.failures) {
    err << fmt::format("warning: seed {}: {}\n", f.seed_index, f.reason);
  }
  return centers;
}

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  const CenterSet centers = extract_centers(a, err);
  emit(a.out, io::centers_to_csv(centers), out);
  return 0;
}

PointCloud load_nominal(const std::string& path, Unit unit) {
  if (fs::path(path).extension() == ".json") {
    json j;
    try {
      j = json::parse(io::read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::parse, fmt::format("{}: {}", path, e.what()));
    }
    if (j.is_object() && j.contains("rows")) {
      return gen_nominal_grid(io::nominal_spec_from_json(j));
    }
    return io::cloud_from_json(j);
  }
  return io::load_cloud(path, unit);
}

// Half the smallest spacing of the nominal grid.
double default_match_distance(const PointCloud& nominal) {
  if (nominal.size() < 2) usage_error("--max-dist is required for a 1-point grid");
  const DistanceMatrix d = pairwise_distances(nominal);
  double best = kInfinity;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) best = std::min(best, d(i, j));
  return best / 2.0;
}

int cmd_match(const MatchArgs& a, std::ostream& out, std::ostream&) {
  require_readable(a.nominal, "--nominal");
  require_readable(a.truth, "--true");
  const Unit unit = parse_unit(a.unit);
  const PointCloud nominal = load_nominal(a.nominal, unit);
  const PointCloud truth = io::load_cloud(a.truth, unit);
  const double max_dist = a.max_dist.value_or(default_match_distance(nominal));
  emit(a.out, io::dump_json(io::match_report_json(match_grids(nominal, truth, max_dist))),
       out);
  return 0;
}

int cmd_pipeline(const PipelineArgs& a, const ExtractArgs& ex, std::ostream& out,
                 std::ostream& err) {
  require_path(a.out_dir, "--out-dir");
  if (a.image.empty() == a.cloud.empty()) {
    usage_error("give exactly one of --image or --cloud");
  }
  if (!a.nominal.empty()) require_readable(a.nominal, "--nominal");
  fs::create_directories(a.out_dir);
  const fs::path dir = a.out_dir;

  std::optional<PointCloud> cloud;
  if (!a.image.empty()) {
    ExtractArgs extract = ex;
    extract.image = a.image;
    const CenterSet centers = extract_centers(extract, err);
    io::write_text_file(dir / "centers.csv", io::centers_to_csv(centers));
    cloud = centers.centers;
  } else {
    require_readable(a.cloud, "--cloud");
    cloud = io::load_cloud(a.cloud, Unit::pixels);
  }

  if (!a.nominal.empty()) {
    const PointCloud nominal = load_nominal(a.nominal, cloud->unit());
    const double max_dist = a.max_dist.value_or(default_match_distance(nominal));
    io::write_text_file(dir / "match.json",
                        io::dump_json(io::match_report_json(
                            match_grids(nominal, *cloud, max_dist))));
  }

  // Round-trip through the serialized form so the bundle equals the chain
  // of individual commands.
  const PointCloud stored = io::parse_cloud_csv(io::cloud_to_csv(*cloud), cloud->unit());
  const PersistenceDiagram d = persist_cloud(stored, true, a.threshold);
  report_truncation(d, err);
  io::write_text_file(dir / "diagram.json", io::dump_json(io::diagram_to_json(d)));
  io::write_text_file(dir / "diagram.svg", render_diagram_svg(d));

  const auto [s, r] = score_diagram(d, a.n, a.epsilon_square, a.epsilon_near);
  const std::string report = io::dump_json(io::score_report_json(s, r));
  io::write_text_file(dir / "scores.json", report);
  out << report;
  return 0;
}

void add_extract_options(CLI::App* sub, ExtractArgs& a, bool with_image) {
  if (with_image) sub->add_option("--image", a.image, "Input image (.pgm or .png)");
  sub->add_option("--seeds", a.seeds, "Seed CSV with header x,y (pixels)");
  sub->add_option("--auto-seeds", a.auto_seeds,
                  "Use the points of this nominal grid CSV/JSON as seeds");
  sub->add_option("--tolerance", a.tolerance, "Max |I - I_seed| admitted")
      ->capture_default_str()
      ->check(CLI::Range(0, 255));
  sub->add_option("--connectivity", a.connectivity, "4 or 8")->capture_default_str();
  sub->add_option("--max-region", a.max_region,
                  "Region size cap in pixels (default: 4x expected indentation "
                  "area with process parameters, else image area / 4)");
  sub->add_option("--crop-width", a.crop_width, "Center crop width");
  sub->add_option("--crop-height", a.crop_height, "Center crop height (default: width)");
  sub->add_option("--speed", a.speed, "Scan speed in um/s");
  sub->add_option("--freq", a.freq, "Strike frequency in Hz");
  sub->add_option("--um-per-px", a.um_per_px, "Image resolution in um/pixel");
  sub->add_option("--grid-n", a.grid_n, "Crop to grid-n strike pitches (needs process parameters)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Square/hexagonal lattice order scores from Vietoris-Rips persistence"};
  app.name(args.empty() ? "lattice_tda" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config,
                 "JSON file with option values (keys are long flag names, "
                 "optionally nested under the command name); flags win");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a lattice point cloud");
  g->add_option("--kind", gen.kind, "square, hex or grid")->capture_default_str();
  g->add_option("--n", gen.n, "Points per side (square) or rows (hex)")->capture_default_str();
  g->add_option("--rows", gen.rows, "Grid rows");
  g->add_option("--cols", gen.cols, "Grid columns");
  g->add_option("--pitch-x", gen.pitch_x, "Grid pitch along x");
  g->add_option("--pitch-y", gen.pitch_y, "Grid pitch along y (default: pitch-x)");
  g->add_option("--datum-x", gen.datum_x, "Upper-left center x")->capture_default_str();
  g->add_option("--datum-y", gen.datum_y, "Upper-left center y")->capture_default_str();
  g->add_option("--unit", gen.unit, "Grid unit: pixels, micrometers, normalized")
      ->capture_default_str();
  g->add_option("--speed", gen.speed, "Scan speed in um/s (grid pitch from process)");
  g->add_option("--freq", gen.freq, "Strike frequency in Hz");
  g->add_option("--um-per-px", gen.um_per_px, "Image resolution in um/pixel");
  g->add_option("--perturb", gen.sigma, "Gaussian displacement sigma")->capture_default_str();
  g->add_option("--seed", gen.seed, "RNG seed for --perturb")->capture_default_str();
  g->add_option("--out", gen.out, "Output .csv or .json (default: CSV on stdout)");

  PersistArgs persist;
  auto* p = app.add_subcommand("persist", "Compute the H0/H1 persistence diagram");
  p->add_option("--input", persist.input, "Point cloud (.csv or .json)");
  p->add_option("--threshold", persist.threshold,
                "Rips threshold (default: enclosing radius)");
  p->add_flag("--no-normalize", persist.no_normalize,
              "Skip the per-axis map onto [-1,1]^2");
  p->add_option("--svg", persist.svg, "Also render the diagram as SVG");
  p->add_option("--out", persist.out, "Diagram JSON (default: stdout)");

  ScoreArgs score;
  auto* s = app.add_subcommand("score", "Order scores from a diagram JSON");
  s->add_option("--input", score.input, "Diagram JSON");
  s->add_option("--batch", score.batch,
                "Score every *.json in this directory into one CSV");
  s->add_option("--n", score.n, "Grid side (default: sqrt of the point count)");
  s->add_option("--epsilon-square", score.epsilon_square,
                "h0_bar bound for the percent-square reading")
      ->capture_default_str();
  s->add_option("--epsilon-near", score.epsilon_near,
                "Distance of h1_bar from 0/1 read as mostly hexagonal/square")
      ->capture_default_str();
  s->add_option("--format", score.format, "json or csv")->capture_default_str();
  s->add_option("--out", score.out, "Output file (default: stdout)");

  ExtractArgs extract;
  auto* e = app.add_subcommand("extract", "Indentation centers by region growing");
  add_extract_options(e, extract, true);
  e->add_option("--out", extract.out, "Centers CSV (default: stdout)");

  MatchArgs match;
  auto* m = app.add_subcommand("match", "Match nominal and true centers");
  m->add_option("--nominal", match.nominal,
                "Nominal grid: cloud CSV/JSON or grid spec JSON");
  m->add_option("--true", match.truth, "True centers CSV/JSON");
  m->add_option("--unit", match.unit, "Unit of CSV inputs")->capture_default_str();
  m->add_option("--max-dist", match.max_dist,
                "Max match distance (default: half the nominal spacing)");
  m->add_option("--out", match.out, "Match report JSON (default: stdout)");

  PipelineArgs pipe;
  ExtractArgs pipe_extract;
  auto* pl = app.add_subcommand("pipeline", "Image or cloud to scores, diagram, SVG and match report");
  pl->add_option("--image", pipe.image, "Input image (.pgm or .png)");
  pl->add_option("--cloud", pipe.cloud, "Input point cloud instead of an image");
  add_extract_options(pl, pipe_extract, false);
  pl->add_option("--nominal", pipe.nominal, "Nominal grid spec JSON or cloud");
  pl->add_option("--max-dist", pipe.max_dist, "Max match distance");
  pl->add_option("--threshold", pipe.threshold, "Rips threshold");
  pl->add_option("--n", pipe.n, "Grid side for the scores");
  pl->add_option("--epsilon-square", pipe.epsilon_square, "See score")->capture_default_str();
  pl->add_option("--epsilon-near", pipe.epsilon_near, "See score")->capture_default_str();
  pl->add_option("--out-dir", pipe.out_dir, "Bundle directory");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(),
                               args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& pe) {
    return app.exit(pe, out, err) == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    apply_config(*sub, config);
    if (sub == g) return cmd_gen(gen, out, err);
    if (sub == p) return cmd_persist(persist, out, err);
    if (sub == s) return cmd_score(score, out, err);
    if (sub == e) return cmd_extract(extract, out, err);
    if (sub == m) return cmd_match(match, out, err);
    return cmd_pipeline(pipe, pipe_extract, out, err);
  } catch (const Error& ex) {
    err << fmt::format("error ({}): {}\n", errc_name(ex.code()), ex.what());
    return exit_code_for(ex.code());
  } catch (const fs::filesystem_error& ex) {
    err << "error (io): " << ex.what() << "\n";
    return 3;
  } catch (const std::exception& ex) {
    err << "error (internal): " << ex.what() << "\n";
    return 5;
  }
}

}  // namespace ltda::cli
