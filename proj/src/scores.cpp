#include "lattice_tda/scores.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "lattice_tda/error.hpp"

namespace ltda {

double h0_variance(const PersistenceDiagram& diagram) {
  const auto& pairs = diagram.h0;
  if (pairs.size() < 2) {
    throw Error(Errc::insufficient_data,
                fmt::format("0D variance needs >= 2 finite pairs, got {}",
                            pairs.size()));
  }
  double mean = 0.0;
  for (const auto& p : pairs) mean += p.lifetime();
  mean /= static_cast<double>(pairs.size());
  double sq = 0.0;
  for (const auto& p : pairs) {
    const double dev = p.lifetime() - mean;
    sq += dev * dev;
  }
  return sq / static_cast<double>(pairs.size());
}

double h0_score(const PersistenceDiagram& diagram) {
  return 4.0 * h0_variance(diagram);
}

double h1_sum(const PersistenceDiagram& diagram) {
  double sum = 0.0;
  for (const auto& p : diagram.h1) sum += p.lifetime();
  return sum;
}

double h1_score(const PersistenceDiagram& diagram, int n) {
  if (n < 2) {
    throw Error(Errc::invalid_n,
                fmt::format("grid side n must be >= 2, got {}", n));
  }
  return h1_sum(diagram) / (2.0 * (std::numbers::sqrt2 - 1.0) * (n - 1));
}

int grid_side_from_count(std::size_t point_count) {
  const auto n = static_cast<long long>(
      std::llround(std::sqrt(static_cast<double>(point_count))));
  if (n < 2 || static_cast<std::size_t>(n * n) != point_count) {
    throw Error(Errc::invalid_n,
                fmt::format("{} points is not an n x n grid; pass n explicitly",
                            point_count));
  }
  return static_cast<int>(n);
}

std::size_t diagram_point_count(const PersistenceDiagram& diagram) {
  return diagram.h0.size() + static_cast<std::size_t>(diagram.h0_infinite);
}

OrderScores compute_scores(const PersistenceDiagram& diagram,
                           std::optional<int> n) {
  OrderScores s;
  s.n = n ? *n : grid_side_from_count(diagram_point_count(diagram));
  s.h0_var = h0_variance(diagram);
  s.h0_bar = 4.0 * s.h0_var;
  s.h1_sum = h1_sum(diagram);
  s.h1_bar = h1_score(diagram, s.n);
  return s;
}

Interpretation interpret(const OrderScores& scores,
                         const InterpretConfig& config) {
  Interpretation out;
  if (!(scores.h0_bar < config.epsilon_square)) {
    out.category = "neither square nor hexagonal";
    out.summary = out.category;
    return out;
  }
  const double square = std::clamp(100.0 * scores.h1_bar, 0.0, 100.0);
  out.percent_square = square;
  out.percent_hexagonal = 100.0 - square;
  if (scores.h1_bar <= config.epsilon_near) {
    out.category = "mostly hexagonal";
  } else if (scores.h1_bar >= 1.0 - config.epsilon_near) {
    out.category = "mostly square";
  } else if (scores.h1_bar < 0.5) {
    out.category = "closer to hexagonal";
  } else {
    out.category = "closer to square";
  }
  out.summary = fmt::format("{:.1f}% square, {:.1f}% hexagonal", square,
                            *out.percent_hexagonal);
  return out;
}

DiagramHistogram histogram(const PersistenceDiagram& diagram, int dim,
                           HistogramStatistic statistic, int bins) {
  if (bins < 1) {
    throw Error(Errc::invalid_parameter, "histogram needs at least one bin");
  }
  if (dim != 0 && dim != 1) {
    throw Error(Errc::invalid_parameter, "histogram dimension must be 0 or 1");
  }
  const auto& pairs = dim == 0 ? diagram.h0 : diagram.h1;
  DiagramHistogram h;
  h.dim = dim;
  h.statistic = statistic;

  std::vector<double> values;
  values.reserve(pairs.size());
  for (const auto& p : pairs) {
    values.push_back(statistic == HistogramStatistic::death ? p.death
                                                            : p.lifetime());
  }
  const double top =
      values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  if (values.empty() || top <= 0.0) {
    h.bin_edges = {0.0, top};
    h.counts = {static_cast<int>(values.size())};
    return h;
  }

  h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.bin_edges[b] = top * b / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    auto b = static_cast<int>(std::floor(v / top * bins));
    ++h.counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
  }
  return h;
}

}  // namespace ltda
