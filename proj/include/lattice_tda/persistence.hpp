#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "lattice_tda/lattice.hpp"

namespace ltda {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Symmetric Euclidean distance matrix with zero diagonal; only the strict
// upper triangle is stored.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const PointCloud& cloud);

  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return entries_[offset(i) + (j - i - 1)];
  }

  double max_distance() const noexcept;

 private:
  std::size_t offset(std::size_t row) const noexcept {
    return row * (2 * n_ - row - 1) / 2;
  }

  std::size_t n_;
  std::vector<double> entries_;
};

struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = 0.0;  // +inf only for the essential 0D class(es)

  double lifetime() const noexcept { return death - birth; }
  friend bool operator==(const PersistencePair&,
                         const PersistencePair&) = default;
};

struct PersistenceDiagram {
  std::vector<PersistencePair> h0;  // finite 0D pairs, sorted by death
  std::vector<PersistencePair> h1;  // finite 1D pairs, sorted by (birth, death)
  int h0_infinite = 0;              // components alive at the threshold
  int h1_unpaired = 0;              // 1-cycles still open at the threshold
  double threshold = 0.0;

  friend bool operator==(const PersistenceDiagram&,
                         const PersistenceDiagram&) = default;
};

DistanceMatrix pairwise_distances(const PointCloud& cloud);

// min_i max_j d(i, j). Above this value the Rips complex is a cone.
double enclosing_radius(const DistanceMatrix& d);

struct H0Result {
  std::vector<PersistencePair> pairs;  // finite, sorted by death
  int infinite = 0;
};

// Kruskal over edges with d <= threshold; deaths are the spanning-forest
// edge weights.
H0Result compute_h0(const DistanceMatrix& d, double threshold = kInfinity);

struct Simplex {
  double value = 0.0;
  int dim = 0;
  std::array<std::uint32_t, 3> vertices{};  // sorted; unused slots are 0

  friend bool operator==(const Simplex&, const Simplex&) = default;
};

// Simplices of dimension 0..2 ordered by (value, dim, vertex tuple).
struct RipsFiltration {
  std::vector<Simplex> simplices;
  double threshold = 0.0;
  double enclosing_radius = 0.0;
  std::size_t vertex_count = 0;
};

// Materializes every simplex up to dimension 2. Meant for small and
// medium clouds; compute_persistence does not go through this.
RipsFiltration build_rips_filtration(const DistanceMatrix& d, double threshold);

struct H1Result {
  std::vector<PersistencePair> pairs;  // sorted by (birth, death)
  int unpaired = 0;
};

// Reduces the boundary matrix of an explicit filtration over GF(2) in
// filtration order. Zero-persistence pairs are dropped. Throws
// Errc::internal_consistency if a 1-cycle stays open although the
// threshold reaches the enclosing radius.
H1Result compute_h1(const RipsFiltration& filtration);

// Same pairs as compute_h1(build_rips_filtration(d, threshold)) computed by
// reducing the coboundary matrix with triangles generated on the fly and
// spanning-tree edges cleared up front. Memory is O(n^2).
H1Result compute_h1_cohomology(const DistanceMatrix& d, double threshold);

// Full H0/H1 diagram. The threshold defaults to the enclosing radius.
PersistenceDiagram compute_persistence(const PointCloud& cloud,
                                       std::optional<double> threshold = {});

// Number of 0D classes alive at parameter t (finite deaths > t plus the
// infinite ones).
int h0_alive_at(const PersistenceDiagram& diagram, double t);

}  // namespace ltda
