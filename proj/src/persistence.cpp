#include "lattice_tda/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <unordered_map>

#include "detail/union_find.hpp"
#include "lattice_tda/error.hpp"

namespace ltda {

DistanceMatrix::DistanceMatrix(const PointCloud& cloud) : n_(cloud.size()) {
  entries_.resize(n_ * (n_ - 1) / 2);
  const auto pts = cloud.points();
  std::size_t k = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      entries_[k++] = std::sqrt(dx * dx + dy * dy);
    }
  }
}

double DistanceMatrix::max_distance() const noexcept {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, v);
  return m;
}

DistanceMatrix pairwise_distances(const PointCloud& cloud) {
  return DistanceMatrix(cloud);
}

double enclosing_radius(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n <= 1) return 0.0;
  double best = kInfinity;
  for (std::size_t i = 0; i < n; ++i) {
    double far = 0.0;
    for (std::size_t j = 0; j < n; ++j) far = std::max(far, d(i, j));
    best = std::min(best, far);
  }
  return best;
}

namespace {

void require_threshold(double threshold) {
  if (!(threshold >= 0.0)) {
    throw Error(Errc::invalid_threshold,
                "threshold must be >= 0, got " + std::to_string(threshold));
  }
}

struct Edge {
  double value;
  std::uint32_t i;
  std::uint32_t j;
};

bool edge_before(const Edge& a, const Edge& b) noexcept {
  return std::tie(a.value, a.i, a.j) < std::tie(b.value, b.i, b.j);
}

// Edges with d <= threshold in filtration order (value, then vertex pair).
std::vector<Edge> sorted_edges(const DistanceMatrix& d, double threshold) {
  std::vector<Edge> edges;
  const auto n = static_cast<std::uint32_t>(d.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double v = d(i, j);
      if (v <= threshold) edges.push_back({v, i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), edge_before);
  return edges;
}

bool pair_before(const PersistencePair& a, const PersistencePair& b) noexcept {
  return std::tie(a.birth, a.death) < std::tie(b.birth, b.death);
}

}  // namespace

H0Result compute_h0(const DistanceMatrix& d, double threshold) {
  require_threshold(threshold);
  H0Result out;
  const std::size_t n = d.size();
  if (n == 0) return out;
  detail::UnionFind components(n);
  for (const Edge& e : sorted_edges(d, threshold)) {
    if (components.unite(e.i, e.j)) {
      out.pairs.push_back({0, 0.0, e.value});
      if (out.pairs.size() + 1 == n) break;
    }
  }
  out.infinite = static_cast<int>(n - out.pairs.size());
  return out;
}

RipsFiltration build_rips_filtration(const DistanceMatrix& d,
                                     double threshold) {
  require_threshold(threshold);
  RipsFiltration f;
  f.threshold = threshold;
  f.enclosing_radius = enclosing_radius(d);
  f.vertex_count = d.size();
  const auto n = static_cast<std::uint32_t>(d.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    f.simplices.push_back({0.0, 0, {i, 0, 0}});
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double dij = d(i, j);
      if (dij > threshold) continue;
      f.simplices.push_back({dij, 1, {i, j, 0}});
      for (std::uint32_t k = j + 1; k < n; ++k) {
        const double dik = d(i, k);
        const double djk = d(j, k);
        if (dik <= threshold && djk <= threshold) {
          f.simplices.push_back({std::max({dij, dik, djk}), 2, {i, j, k}});
        }
      }
    }
  }
  std::sort(f.simplices.begin(), f.simplices.end(),
            [](const Simplex& a, const Simplex& b) {
              return std::tie(a.value, a.dim, a.vertices) <
                     std::tie(b.value, b.dim, b.vertices);
            });
  return f;
}

namespace {

// a ^= b for sorted index lists over GF(2).
void add_column(std::vector<std::uint32_t>& a,
                const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> sum;
  sum.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(sum));
  a.swap(sum);
}

void check_open_cycles(int unpaired, double threshold, double radius) {
  if (unpaired > 0 && threshold >= radius) {
    throw Error(Errc::internal_consistency,
                std::to_string(unpaired) +
                    " 1-cycle(s) unpaired above the enclosing radius");
  }
}

}  // namespace

H1Result compute_h1(const RipsFiltration& filtration) {
  const auto& simplices = filtration.simplices;
  const std::size_t n = filtration.vertex_count;

  // Filtration index of every edge, addressed by vertex pair.
  std::vector<std::int64_t> edge_index(n * n, -1);
  std::size_t edge_count = 0;
  detail::UnionFind components(n);
  std::size_t merges = 0;
  for (std::size_t s = 0; s < simplices.size(); ++s) {
    const Simplex& sx = simplices[s];
    if (sx.dim != 1) continue;
    const auto [a, b, unused] = sx.vertices;
    edge_index[a * n + b] = static_cast<std::int64_t>(s);
    ++edge_count;
    if (components.unite(a, b)) ++merges;
  }

  H1Result out;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> reduced_by_low;
  std::size_t paired = 0;
  for (std::size_t s = 0; s < simplices.size(); ++s) {
    const Simplex& sx = simplices[s];
    if (sx.dim != 2) continue;
    const auto [a, b, c] = sx.vertices;
    std::vector<std::uint32_t> column = {
        static_cast<std::uint32_t>(edge_index[a * n + b]),
        static_cast<std::uint32_t>(edge_index[a * n + c]),
        static_cast<std::uint32_t>(edge_index[b * n + c])};
    std::sort(column.begin(), column.end());
    while (!column.empty()) {
      auto it = reduced_by_low.find(column.back());
      if (it == reduced_by_low.end()) break;
      add_column(column, it->second);
    }
    if (column.empty()) continue;
    const std::uint32_t low = column.back();
    ++paired;
    const double birth = simplices[low].value;
    if (birth != sx.value) out.pairs.push_back({1, birth, sx.value});
    reduced_by_low.emplace(low, std::move(column));
  }

  // Cycle-creating edges are those that did not merge two components.
  out.unpaired = static_cast<int>(edge_count - merges - paired);
  check_open_cycles(out.unpaired, filtration.threshold,
                    filtration.enclosing_radius);
  std::sort(out.pairs.begin(), out.pairs.end(), pair_before);
  return out;
}

namespace {

struct Triangle {
  double value;
  std::uint64_t code;  // lexicographic rank of the sorted vertex triple

  friend bool operator==(const Triangle&, const Triangle&) = default;
  friend bool operator<(const Triangle& a, const Triangle& b) noexcept {
    return a.value < b.value || (a.value == b.value && a.code < b.code);
  }
  friend bool operator>(const Triangle& a, const Triangle& b) noexcept {
    return b < a;
  }
};

class CoboundaryReducer {
 public:
  CoboundaryReducer(const DistanceMatrix& d, double threshold)
      : n_(d.size()), threshold_(threshold), dense_(n_ * n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) dense_[i * n_ + j] = d(i, j);
    }
  }

  H1Result run(const std::vector<Edge>& edges) {
    edges_ = &edges;
    // Spanning-forest edges kill 0D classes; their cocycle columns are zero.
    std::vector<bool> clear(edges.size(), false);
    detail::UnionFind components(n_);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (components.unite(edges[e].i, edges[e].j)) clear[e] = true;
    }

    H1Result out;
    for (std::size_t e = edges.size(); e-- > 0;) {
      if (clear[e]) continue;
      const auto pivot = reduce(static_cast<std::uint32_t>(e));
      if (!pivot) {
        ++out.unpaired;
        continue;
      }
      if (pivot->value != edges[e].value) {
        out.pairs.push_back({1, edges[e].value, pivot->value});
      }
    }
    std::sort(out.pairs.begin(), out.pairs.end(), pair_before);
    return out;
  }

 private:
  double dist(std::size_t i, std::size_t j) const noexcept {
    return dense_[i * n_ + j];
  }

  Triangle make_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c,
                         double value) const noexcept {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return {value, (static_cast<std::uint64_t>(a) * n_ + b) * n_ + c};
  }

  template <class Visit>
  void for_each_cofacet(std::uint32_t edge, Visit&& visit) const {
    const Edge& e = (*edges_)[edge];
    const double* row_i = &dense_[e.i * n_];
    const double* row_j = &dense_[e.j * n_];
    for (std::uint32_t k = 0; k < n_; ++k) {
      const double dik = row_i[k];
      const double djk = row_j[k];
      if (k == e.i || k == e.j || dik > threshold_ || djk > threshold_) {
        continue;
      }
      visit(make_triangle(e.i, e.j, k, std::max({e.value, dik, djk})));
    }
  }

  std::optional<Triangle> min_cofacet(std::uint32_t edge) const {
    std::optional<Triangle> best;
    for_each_cofacet(edge, [&](const Triangle& t) {
      if (!best || t < *best) best = t;
    });
    return best;
  }

  void push_coboundary(std::uint32_t edge) {
    for_each_cofacet(edge, [&](const Triangle& t) {
      heap_.push_back(t);
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
    });
  }

  Triangle pop_heap_top() {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
    const Triangle t = heap_.back();
    heap_.pop_back();
    return t;
  }

  // Smallest surviving triangle of the working column; equal entries
  // cancel in pairs.
  std::optional<Triangle> heap_pivot() {
    while (!heap_.empty()) {
      const Triangle top = pop_heap_top();
      if (!heap_.empty() && heap_.front() == top) {
        pop_heap_top();
        continue;
      }
      heap_.push_back(top);
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
      return top;
    }
    return std::nullopt;
  }

  std::optional<Triangle> reduce(std::uint32_t edge) {
    // An unreduced column already has a free pivot in the common case.
    const auto first = min_cofacet(edge);
    if (!first) return std::nullopt;
    if (!pivots_.contains(first->code)) {
      pivots_.emplace(first->code, Column{edge, {}});
      return first;
    }

    heap_.clear();
    push_coboundary(edge);
    std::vector<std::uint32_t> combination;  // edges added besides `edge`
    while (true) {
      const auto pivot = heap_pivot();
      if (!pivot) return std::nullopt;
      auto it = pivots_.find(pivot->code);
      if (it == pivots_.end()) {
        std::sort(combination.begin(), combination.end());
        combination = cancel_pairs(std::move(combination));
        pivots_.emplace(pivot->code, Column{edge, std::move(combination)});
        return pivot;
      }
      const Column& other = it->second;
      push_coboundary(other.edge);
      combination.push_back(other.edge);
      for (std::uint32_t extra : other.combination) {
        push_coboundary(extra);
        combination.push_back(extra);
      }
    }
  }

  static std::vector<std::uint32_t> cancel_pairs(
      std::vector<std::uint32_t> sorted) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      if ((j - i) % 2 == 1) out.push_back(sorted[i]);
      i = j;
    }
    return out;
  }

  struct Column {
    std::uint32_t edge;
    std::vector<std::uint32_t> combination;
  };

  std::size_t n_;
  double threshold_;
  std::vector<double> dense_;
  const std::vector<Edge>* edges_ = nullptr;
  std::unordered_map<std::uint64_t, Column> pivots_;
  std::vector<Triangle> heap_;
};

}  // namespace

H1Result compute_h1_cohomology(const DistanceMatrix& d, double threshold) {
  require_threshold(threshold);
  const auto edges = sorted_edges(d, threshold);
  H1Result out = CoboundaryReducer(d, threshold).run(edges);
  check_open_cycles(out.unpaired, threshold, enclosing_radius(d));
  return out;
}

PersistenceDiagram compute_persistence(const PointCloud& cloud,
                                       std::optional<double> threshold) {
  const DistanceMatrix d = pairwise_distances(cloud);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d(i, j) < kDuplicateTolerance) {
        throw Error(Errc::duplicate_point, "points " + std::to_string(i) +
                                               " and " + std::to_string(j) +
                                               " coincide");
      }
    }
  }
  const double t = threshold.value_or(enclosing_radius(d));
  require_threshold(t);

  PersistenceDiagram diagram;
  diagram.threshold = t;
  H0Result h0 = compute_h0(d, t);
  diagram.h0 = std::move(h0.pairs);
  diagram.h0_infinite = h0.infinite;
  H1Result h1 = compute_h1_cohomology(d, t);
  diagram.h1 = std::move(h1.pairs);
  diagram.h1_unpaired = h1.unpaired;
  return diagram;
}

int h0_alive_at(const PersistenceDiagram& diagram, double t) {
  int alive = diagram.h0_infinite;
  for (const auto& p : diagram.h0) {
    if (p.death > t) ++alive;
  }
  return alive;
}

}  // namespace ltda
