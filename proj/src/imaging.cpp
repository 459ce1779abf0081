#include "lattice_tda/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "lattice_tda/error.hpp"

namespace ltda {

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h) {
  if (w <= 0 || h <= 0) {
    throw Error(Errc::invalid_parameter,
                fmt::format("image dimensions must be positive, got {}x{}", w, h));
  }
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

GrayImage to_grayscale(const RgbImage& image) {
  if (image.bit_depth != 8) {
    throw Error(Errc::format, fmt::format("unsupported bit depth {}; need 8",
                                          image.bit_depth));
  }
  GrayImage out(image.width, image.height);
  if (image.rgb.size() != out.pixels.size() * 3) {
    throw Error(Errc::format, "RGB buffer size does not match dimensions");
  }
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const double lum = 0.299 * image.rgb[3 * i] + 0.587 * image.rgb[3 * i + 1] +
                       0.114 * image.rgb[3 * i + 2];
    out.pixels[i] = static_cast<std::uint8_t>(
        std::clamp(std::lround(lum), 0L, 255L));
  }
  return out;
}

GrayImage center_crop(const GrayImage& image, const CropSpec& spec) {
  if (spec.out_width <= 0 || spec.out_height <= 0 ||
      spec.out_width > image.width || spec.out_height > image.height) {
    throw Error(Errc::bounds,
                fmt::format("crop {}x{} does not fit in {}x{} image",
                            spec.out_width, spec.out_height, image.width,
                            image.height));
  }
  const int x0 = (image.width - spec.out_width) / 2;
  const int y0 = (image.height - spec.out_height) / 2;
  GrayImage out(spec.out_width, spec.out_height);
  out.pitch_um = image.pitch_um;
  for (int y = 0; y < spec.out_height; ++y) {
    const auto* src = &image.pixels[static_cast<std::size_t>(y0 + y) *
                                        image.width + x0];
    std::copy(src, src + spec.out_width,
              &out.pixels[static_cast<std::size_t>(y) * spec.out_width]);
  }
  return out;
}

CropSpec derive_crop(double um_per_px, double speed_um_s, double freq_hz,
                     int grid_n) {
  if (grid_n <= 0) {
    throw Error(Errc::invalid_parameter, "grid size must be positive");
  }
  const double pitch_px = nominal_pitch_px(speed_um_s, freq_hz, um_per_px);
  const double side = std::round(grid_n * pitch_px);
  if (!(side >= 1.0) || side > std::numeric_limits<int>::max()) {
    throw Error(Errc::invalid_parameter,
                fmt::format("derived crop side {} is out of range", side));
  }
  const int s = static_cast<int>(side);
  return {s, s};
}

double expected_circle_area_px(double pitch_px) {
  return std::numbers::pi * pitch_px * pitch_px / 4.0;
}

CenterSet region_grow(const GrayImage& image, const RegionGrowParams& params) {
  if (params.tolerance < 0 || params.tolerance > 255) {
    throw Error(Errc::invalid_parameter, "tolerance must be in 0..255");
  }
  const std::int64_t area = static_cast<std::int64_t>(image.width) * image.height;
  const std::int64_t cap =
      params.max_region_px > 0 ? params.max_region_px : area / 4;

  struct Seed {
    int x;
    int y;
  };
  std::vector<Seed> seeds;
  for (std::size_t s = 0; s < params.seeds.size(); ++s) {
    const Point2& p = params.seeds[s];
    const double rx = std::round(p.x);
    const double ry = std::round(p.y);
    if (!(rx >= 0 && rx < image.width && ry >= 0 && ry < image.height)) {
      throw Error(Errc::bounds,
                  fmt::format("seed {} at ({}, {}) is outside the {}x{} image",
                              s, p.x, p.y, image.width, image.height));
    }
    seeds.push_back({static_cast<int>(rx), static_cast<int>(ry)});
  }

  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int neighbours = params.connectivity == Connectivity::eight ? 8 : 4;

  std::vector<std::uint8_t> visited(static_cast<std::size_t>(area), 0);
  std::vector<std::size_t> region;
  std::vector<Point2> centers;
  CenterSet out{PointCloud({Point2{}}, Unit::pixels), {}, {}, {}};

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const int ref = image.at(seeds[s].x, seeds[s].y);
    region.clear();
    const std::size_t start =
        static_cast<std::size_t>(seeds[s].y) * image.width + seeds[s].x;
    visited[start] = 1;
    region.push_back(start);
    bool over_cap = false;
    // `region` doubles as the BFS queue.
    for (std::size_t head = 0; head < region.size(); ++head) {
      if (static_cast<std::int64_t>(region.size()) > cap) {
        over_cap = true;
        break;
      }
      const int x = static_cast<int>(region[head] % image.width);
      const int y = static_cast<int>(region[head] / image.width);
      for (int k = 0; k < neighbours; ++k) {
        const int nx = x + kDx[k];
        const int ny = y + kDy[k];
        if (nx < 0 || ny < 0 || nx >= image.width || ny >= image.height) continue;
        const std::size_t idx = static_cast<std::size_t>(ny) * image.width + nx;
        if (visited[idx]) continue;
        if (std::abs(static_cast<int>(image.pixels[idx]) - ref) > params.tolerance) {
          continue;
        }
        visited[idx] = 1;
        region.push_back(idx);
      }
    }
    over_cap = over_cap || static_cast<std::int64_t>(region.size()) > cap;

    std::int64_t sum_x = 0;
    std::int64_t sum_y = 0;
    for (std::size_t idx : region) {
      sum_x += static_cast<std::int64_t>(idx % image.width);
      sum_y += static_cast<std::int64_t>(idx / image.width);
      visited[idx] = 0;
    }
    if (over_cap) {
      out.failures.push_back(
          {s, fmt::format("region exceeds {} px cap", cap)});
      continue;
    }
    const auto size = static_cast<std::int64_t>(region.size());
    if (size < 4) {
      out.failures.push_back(
          {s, fmt::format("region of {} px is smaller than 4 px", size)});
      continue;
    }
    centers.push_back({static_cast<double>(sum_x) / static_cast<double>(size),
                       static_cast<double>(sum_y) / static_cast<double>(size)});
    out.region_sizes.push_back(size);
    out.seed_indices.push_back(s);
  }

  if (centers.empty()) {
    throw Error(Errc::empty_result, "region growing failed for every seed");
  }
  out.centers = PointCloud(std::move(centers), Unit::pixels);
  return out;
}

namespace {

// Index of the nearest point of `to` for every point of `from`.
std::vector<std::size_t> nearest(const PointCloud& from, const PointCloud& to,
                                 std::vector<double>& dist) {
  std::vector<std::size_t> idx(from.size());
  dist.assign(from.size(), 0.0);
  for (std::size_t i = 0; i < from.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < to.size(); ++j) {
      const double d = std::hypot(from[i].x - to[j].x, from[i].y - to[j].y);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    idx[i] = best_j;
    dist[i] = best;
  }
  return idx;
}

}  // namespace

MatchReport match_grids(const PointCloud& nominal,
                        const PointCloud& true_centers, double max_dist) {
  if (nominal.unit() != true_centers.unit()) {
    throw Error(Errc::unit_mismatch,
                fmt::format("cannot match {} against {}",
                            unit_name(nominal.unit()),
                            unit_name(true_centers.unit())));
  }
  if (!(max_dist >= 0.0)) {
    throw Error(Errc::invalid_parameter, "max_dist must be >= 0");
  }
  std::vector<double> d_nom;
  std::vector<double> d_true;
  const auto nom_to_true = nearest(nominal, true_centers, d_nom);
  const auto true_to_nom = nearest(true_centers, nominal, d_true);

  MatchReport report;
  std::vector<bool> true_used(true_centers.size(), false);
  for (std::size_t i = 0; i < nominal.size(); ++i) {
    const std::size_t j = nom_to_true[i];
    if (true_to_nom[j] == i && d_nom[i] <= max_dist) {
      const Point2 a = nominal[i];
      const Point2 b = true_centers[j];
      report.matched.push_back({i, j, a, b, b.x - a.x, b.y - a.y});
      true_used[j] = true;
    } else {
      report.missed.push_back(nominal[i]);
    }
  }
  for (std::size_t j = 0; j < true_centers.size(); ++j) {
    if (!true_used[j]) report.extra.push_back(true_centers[j]);
  }
  return report;
}

}  // namespace ltda
