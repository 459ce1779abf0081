#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lattice_tda/persistence.hpp"

namespace ltda {

// Thresholds for reading the scores. None of them come with the measures
// themselves; they are configurable defaults.
struct InterpretConfig {
  // Percent-square reading requires h0_bar below this.
  double epsilon_square = 0.01;
  // h1_bar within this of 0 (resp. 1) reads as mostly hexagonal (square).
  double epsilon_near = 0.1;
};

struct OrderScores {
  int n = 0;
  double h0_var = 0.0;
  double h0_bar = 0.0;
  double h1_sum = 0.0;
  double h1_bar = 0.0;
};

struct Interpretation {
  std::optional<double> percent_square;
  std::optional<double> percent_hexagonal;
  std::string category;
  std::string summary;  // e.g. "31.4% square, 68.6% hexagonal"
};

// Population variance of the finite 0D lifetimes. Needs >= 2 finite pairs.
double h0_variance(const PersistenceDiagram& diagram);

// 4 * h0_variance; the variance is at most 1/4 over lattice types.
double h0_score(const PersistenceDiagram& diagram);

double h1_sum(const PersistenceDiagram& diagram);

// h1_sum / (2 (sqrt(2) - 1) (n - 1)); exactly 1 for a perfect n x n square.
// Not clamped.
double h1_score(const PersistenceDiagram& diagram, int n);

// round(sqrt(point_count)), or Errc::invalid_n if that does not square back
// to point_count.
int grid_side_from_count(std::size_t point_count);

// Point count implied by a diagram: finite 0D pairs plus infinite bars.
std::size_t diagram_point_count(const PersistenceDiagram& diagram);

// Uses grid_side_from_count when n is not given.
OrderScores compute_scores(const PersistenceDiagram& diagram,
                           std::optional<int> n = {});

Interpretation interpret(const OrderScores& scores,
                         const InterpretConfig& config = {});

enum class HistogramStatistic { death, lifetime };

struct DiagramHistogram {
  int dim = 0;
  HistogramStatistic statistic = HistogramStatistic::death;
  std::vector<double> bin_edges;  // bins + 1 ascending values
  std::vector<int> counts;
};

// Uniform bins over [0, max]; the last bin is closed on the right. With no
// finite pairs of that dimension the result is a single empty bin [0, 0].
DiagramHistogram histogram(const PersistenceDiagram& diagram, int dim,
                           HistogramStatistic statistic, int bins);

}  // namespace ltda
