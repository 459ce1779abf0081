#include "lattice_tda/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lattice_tda/error.hpp"

namespace ltda::oracle {

namespace {

double euclid(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

struct Cell {
  int dim;
  double value;
  std::vector<int> verts;
};

}  // namespace

PersistenceDiagram naive_persistence(const PointCloud& cloud) {
  const int n = static_cast<int>(cloud.size());
  if (cloud.size() > kMaxOraclePoints) {
    throw Error(Errc::size_guard, "oracle limited to " +
                                      std::to_string(kMaxOraclePoints) +
                                      " points, got " + std::to_string(n));
  }
  auto dist = [&](int i, int j) { return euclid(cloud[i], cloud[j]); };

  std::vector<Cell> cells;
  double max_dist = 0.0;
  for (int i = 0; i < n; ++i) cells.push_back({0, 0.0, {i}});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      cells.push_back({1, dist(i, j), {i, j}});
      max_dist = std::max(max_dist, dist(i, j));
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        cells.push_back({2, std::max({dist(i, j), dist(i, k), dist(j, k)}),
                         {i, j, k}});

  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& a, const Cell& b) {
                     if (a.value != b.value) return a.value < b.value;
                     return a.dim < b.dim;
                   });

  const std::size_t m = cells.size();
  // matrix[c][r] == 1 iff cell r is a facet of cell c.
  std::vector<std::vector<char>> matrix(m, std::vector<char>(m, 0));
  for (std::size_t c = 0; c < m; ++c) {
    if (cells[c].dim == 0) continue;
    for (std::size_t r = 0; r < m; ++r) {
      if (cells[r].dim != cells[c].dim - 1) continue;
      const auto& big = cells[c].verts;
      const auto& small = cells[r].verts;
      if (std::includes(big.begin(), big.end(), small.begin(), small.end())) {
        matrix[c][r] = 1;
      }
    }
  }

  auto low = [&](std::size_t c) -> long {
    for (std::size_t r = m; r-- > 0;)
      if (matrix[c][r]) return static_cast<long>(r);
    return -1;
  };

  std::vector<long> lows(m, -1);
  for (std::size_t j = 0; j < m; ++j) {
    bool changed = true;
    while (changed) {
      changed = false;
      const long lj = low(j);
      if (lj < 0) break;
      for (std::size_t k = 0; k < j; ++k) {
        if (lows[k] == lj) {
          for (std::size_t r = 0; r < m; ++r) matrix[j][r] ^= matrix[k][r];
          changed = true;
          break;
        }
      }
    }
    lows[j] = low(j);
  }

  std::vector<bool> paired(m, false);
  PersistenceDiagram out;
  out.threshold = max_dist;
  for (std::size_t j = 0; j < m; ++j) {
    if (lows[j] < 0) continue;
    const auto i = static_cast<std::size_t>(lows[j]);
    paired[i] = paired[j] = true;
    const double birth = cells[i].value;
    const double death = cells[j].value;
    if (birth == death) continue;
    if (cells[i].dim == 0) out.h0.push_back({0, birth, death});
    if (cells[i].dim == 1) out.h1.push_back({1, birth, death});
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (paired[j]) continue;
    if (cells[j].dim == 0) ++out.h0_infinite;
    if (cells[j].dim == 1) ++out.h1_unpaired;
  }

  auto by_coords = [](const PersistencePair& a, const PersistencePair& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  };
  std::sort(out.h0.begin(), out.h0.end(), [](const auto& a, const auto& b) {
    return a.death < b.death;
  });
  std::sort(out.h1.begin(), out.h1.end(), by_coords);
  return out;
}

int components_at_threshold(const PointCloud& cloud, double t) {
  const std::size_t n = cloud.size();
  std::vector<bool> seen(n, false);
  int count = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++count;
    std::vector<std::size_t> stack = {start};
    seen[start] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        if (!seen[w] && euclid(cloud[v], cloud[w]) <= t) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return count;
}

}  // namespace ltda::oracle
