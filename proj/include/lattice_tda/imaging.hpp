#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lattice_tda/lattice.hpp"

namespace ltda {

// 8-bit single-channel raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  std::optional<double> pitch_um;  // micrometers per pixel

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);

  std::uint8_t at(int x, int y) const noexcept {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) noexcept {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// Interleaved RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<std::uint8_t> rgb;  // 3 * width * height samples
};

// round(0.299 R + 0.587 G + 0.114 B). Only 8-bit input is accepted.
GrayImage to_grayscale(const RgbImage& image);

struct CropSpec {
  int out_width = 0;
  int out_height = 0;
};

// Window anchored at floor((in - out) / 2) on each axis.
GrayImage center_crop(const GrayImage& image, const CropSpec& spec);

// Square crop covering grid_n strike pitches, where one pitch is
// (speed / freq) / um_per_px pixels.
CropSpec derive_crop(double um_per_px, double speed_um_s, double freq_hz,
                     int grid_n);

// Expected indentation area in pixels when one indentation spans one pitch.
double expected_circle_area_px(double pitch_px);

enum class Connectivity { four = 4, eight = 8 };

struct RegionGrowParams {
  std::vector<Point2> seeds;  // pixel coordinates, rounded to nearest pixel
  int tolerance = 25;         // max |I - I_seed|
  Connectivity connectivity = Connectivity::four;
  std::int64_t max_region_px = 0;  // 0 selects image_area / 4
};

struct SeedFailure {
  std::size_t seed_index = 0;
  std::string reason;
};

struct CenterSet {
  PointCloud centers;
  std::vector<std::int64_t> region_sizes;
  std::vector<std::size_t> seed_indices;  // seed that produced each center
  std::vector<SeedFailure> failures;
};

// Flood fill from each seed; the center is the mean pixel coordinate of the
// region. Regions over max_region_px or under 4 pixels are failures. Throws
// Errc::bounds for seeds outside the image and Errc::empty_result when
// every seed fails.
CenterSet region_grow(const GrayImage& image, const RegionGrowParams& params);

struct MatchedPair {
  std::size_t nominal_index = 0;
  std::size_t true_index = 0;
  Point2 nominal;
  Point2 truth;
  double dx = 0.0;  // truth - nominal
  double dy = 0.0;
};

struct MatchReport {
  std::vector<MatchedPair> matched;
  std::vector<Point2> missed;  // nominal points without a partner
  std::vector<Point2> extra;   // true points without a partner
};

// Mutual nearest neighbours within max_dist (ties go to the lower index).
MatchReport match_grids(const PointCloud& nominal,
                        const PointCloud& true_centers, double max_dist);

}  // namespace ltda
