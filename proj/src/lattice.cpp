#include "lattice_tda/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "lattice_tda/error.hpp"

namespace ltda {

std::string_view unit_name(Unit unit) noexcept {
  switch (unit) {
    case Unit::pixels: return "pixels";
    case Unit::micrometers: return "micrometers";
    case Unit::normalized: return "normalized";
  }
  return "normalized";
}

Unit parse_unit(std::string_view name) {
  if (name == "pixels") return Unit::pixels;
  if (name == "micrometers") return Unit::micrometers;
  if (name == "normalized") return Unit::normalized;
  throw Error(Errc::parse, "unknown unit '" + std::string(name) + "'");
}

PointCloud::PointCloud(std::vector<Point2> points, Unit unit)
    : points_(std::move(points)), unit_(unit) {
  if (points_.empty()) {
    throw Error(Errc::invalid_parameter, "point cloud must not be empty");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw Error(Errc::invalid_parameter,
                  "point " + std::to_string(i) + " is not finite");
    }
  }
}

void check_no_duplicates(const PointCloud& cloud, double tolerance) {
  const auto pts = cloud.points();
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && a < b);
  });
  // Sweep in x; only points within `tolerance` in x can collide.
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Point2& p = pts[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Point2& q = pts[order[j]];
      if (q.x - p.x >= tolerance) break;
      if (std::hypot(q.x - p.x, q.y - p.y) < tolerance) {
        throw Error(Errc::duplicate_point,
                    "points " + std::to_string(std::min(order[i], order[j])) +
                        " and " + std::to_string(std::max(order[i], order[j])) +
                        " coincide");
      }
    }
  }
}

namespace {

void require_lattice_n(const LatticeSpec& spec) {
  if (spec.n < 2) {
    throw Error(Errc::invalid_spec,
                "lattice size n must be >= 2, got " + std::to_string(spec.n));
  }
}

}  // namespace

PointCloud gen_square(const LatticeSpec& spec) {
  require_lattice_n(spec);
  const int n = spec.n;
  const double denom = n - 1;
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    const double y = -1.0 + 2.0 * j / denom;
    for (int i = 0; i < n; ++i) {
      pts.push_back({-1.0 + 2.0 * i / denom, y});
    }
  }
  return PointCloud(std::move(pts), Unit::normalized);
}

double hexagonal_pitch(int n) { return 4.0 / (2.0 * n - 1.0); }

PointCloud gen_hexagonal(const LatticeSpec& spec) {
  require_lattice_n(spec);
  const int n = spec.n;
  const double s = hexagonal_pitch(n);
  const double row_step = s * std::numbers::sqrt3 / 2.0;
  const double mid_row = (n - 1) / 2.0;
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    const double shift = (r % 2 == 1) ? s / 2.0 : 0.0;
    const double y = (r - mid_row) * row_step;
    for (int k = 0; k < n; ++k) {
      pts.push_back({-1.0 + k * s + shift, y});
    }
  }
  return PointCloud(std::move(pts), Unit::normalized);
}

PointCloud gen_lattice(const LatticeSpec& spec) {
  return spec.kind == LatticeKind::square ? gen_square(spec)
                                          : gen_hexagonal(spec);
}

PointCloud gen_nominal_grid(const NominalGridSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1 ||
      static_cast<long long>(spec.rows) * spec.cols < 4) {
    throw Error(Errc::invalid_spec, "nominal grid needs rows*cols >= 4");
  }
  if (!(spec.pitch_x > 0.0) || !(spec.pitch_y > 0.0)) {
    throw Error(Errc::invalid_spec, "nominal grid pitch must be positive");
  }
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(spec.rows) * spec.cols);
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      pts.push_back({spec.datum.x + c * spec.pitch_x,
                     spec.datum.y + r * spec.pitch_y});
    }
  }
  return PointCloud(std::move(pts), spec.unit);
}

double nominal_pitch_px(double speed_um_s, double freq_hz, double um_per_px) {
  if (!(speed_um_s > 0.0) || !(freq_hz > 0.0) || !(um_per_px > 0.0)) {
    throw Error(Errc::invalid_parameter,
                "speed, frequency and resolution must be positive");
  }
  return speed_um_s / freq_hz / um_per_px;
}

PointCloud perturb(const PointCloud& cloud, const PerturbationSpec& spec) {
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) {
    throw Error(Errc::invalid_parameter, "sigma must be finite and >= 0");
  }
  if (spec.sigma == 0.0) return cloud;

  std::mt19937_64 engine(spec.rng_seed);
  // Uniform in (0, 1): 53 random bits, offset by half an ulp to avoid 0.
  auto uniform = [&engine] {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
  };
  std::vector<Point2> out;
  out.reserve(cloud.size());
  for (const Point2& p : cloud.points()) {
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    out.push_back({p.x + spec.sigma * radius * std::cos(angle),
                   p.y + spec.sigma * radius * std::sin(angle)});
  }
  return PointCloud(std::move(out), cloud.unit());
}

std::pair<PointCloud, BoxTransform> scale_to_unit_box(const PointCloud& cloud) {
  const auto pts = cloud.points();
  auto [min_x, max_x] = std::minmax_element(
      pts.begin(), pts.end(),
      [](const Point2& a, const Point2& b) { return a.x < b.x; });
  auto [min_y, max_y] = std::minmax_element(
      pts.begin(), pts.end(),
      [](const Point2& a, const Point2& b) { return a.y < b.y; });
  const double x0 = min_x->x, x1 = max_x->x;
  const double y0 = min_y->y, y1 = max_y->y;
  if (!(x1 > x0) || !(y1 > y0)) {
    throw Error(Errc::degenerate_extent,
                "cannot scale to [-1,1]^2: an axis has zero extent");
  }
  const double wx = x1 - x0;
  const double wy = y1 - y0;

  BoxTransform tf;
  tf.scale_x = 2.0 / wx;
  tf.offset_x = -1.0 - x0 * tf.scale_x;
  tf.scale_y = 2.0 / wy;
  tf.offset_y = -1.0 - y0 * tf.scale_y;

  // Evaluated as 2(x - min)/w - 1 so grid points and the box edges map
  // exactly; the recorded scale/offset describe the same map.
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const Point2& p : pts) {
    out.push_back({2.0 * (p.x - x0) / wx - 1.0, 2.0 * (p.y - y0) / wy - 1.0});
  }
  PointCloud scaled(std::move(out), Unit::normalized);
  check_no_duplicates(scaled);
  return {std::move(scaled), tf};
}

}  // namespace ltda
