#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace ltda {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class Unit { pixels, micrometers, normalized };

std::string_view unit_name(Unit unit) noexcept;
// Throws Errc::parse for unknown names.
Unit parse_unit(std::string_view name);

// Ordered, non-empty list of finite 2D points tagged with a unit.
class PointCloud {
 public:
  PointCloud(std::vector<Point2> points, Unit unit);

  std::span<const Point2> points() const noexcept { return points_; }
  const Point2& operator[](std::size_t i) const noexcept { return points_[i]; }
  std::size_t size() const noexcept { return points_.size(); }
  Unit unit() const noexcept { return unit_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<Point2> points_;
  Unit unit_;
};

// Minimum separation enforced between points of a normalized cloud.
inline constexpr double kDuplicateTolerance = 1e-12;

// Throws Errc::duplicate_point if two points are closer than `tolerance`.
void check_no_duplicates(const PointCloud& cloud,
                         double tolerance = kDuplicateTolerance);

enum class LatticeKind { square, hexagonal };

struct LatticeSpec {
  LatticeKind kind = LatticeKind::square;
  int n = 2;  // points per side (square) or rows (hexagonal)
};

struct NominalGridSpec {
  int rows = 0;
  int cols = 0;
  double pitch_x = 0.0;
  double pitch_y = 0.0;
  Point2 datum;  // upper-left center
  Unit unit = Unit::pixels;
};

struct PerturbationSpec {
  double sigma = 0.0;
  std::uint64_t rng_seed = 0;
};

// Per-axis affine map applied by scale_to_unit_box: x' = scale_x * x + offset_x.
struct BoxTransform {
  double scale_x = 1.0;
  double offset_x = 0.0;
  double scale_y = 1.0;
  double offset_y = 0.0;
};

// n x n grid on [-1,1]^2 with spacing 2/(n-1).
PointCloud gen_square(const LatticeSpec& spec);

// Triangular (close-packed) lattice: n rows of n points, odd rows shifted by
// half a pitch, row spacing pitch*sqrt(3)/2. The pitch is chosen so the
// bounding box is 2 wide; the cloud is centered on the origin.
PointCloud gen_hexagonal(const LatticeSpec& spec);

// Dispatches on spec.kind.
PointCloud gen_lattice(const LatticeSpec& spec);

// Side length of the hexagonal lattice produced by gen_hexagonal(n).
double hexagonal_pitch(int n);

// Row-major grid: point (r, c) = datum + (c * pitch_x, r * pitch_y).
PointCloud gen_nominal_grid(const NominalGridSpec& spec);

// Strike offset in pixels from scan speed (um/s), strike frequency (Hz) and
// image resolution (um/pixel).
double nominal_pitch_px(double speed_um_s, double freq_hz, double um_per_px);

// Adds i.i.d. N(0, sigma^2) displacements per axis. The engine is
// mt19937_64 with a Box-Muller transform, so a seed fixes the output.
PointCloud perturb(const PointCloud& cloud, const PerturbationSpec& spec);

// Per-axis min-max map onto [-1,1]^2. Throws Errc::degenerate_extent if
// either axis has zero extent and Errc::duplicate_point if two normalized
// points coincide.
std::pair<PointCloud, BoxTransform> scale_to_unit_box(const PointCloud& cloud);

}  // namespace ltda
