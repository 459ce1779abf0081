#pragma once

#include <cstddef>

#include "lattice_tda/lattice.hpp"
#include "lattice_tda/persistence.hpp"

namespace ltda::oracle {

inline constexpr std::size_t kMaxOraclePoints = 16;

// Brute-force Rips persistence: complete 2-skeleton, dense GF(2) boundary
// matrix, textbook column reduction. Shares no code with the engine.
// Throws Errc::size_guard above kMaxOraclePoints points.
PersistenceDiagram naive_persistence(const PointCloud& cloud);

// Connected components of the graph {d(i,j) <= t}, by depth-first search.
int components_at_threshold(const PointCloud& cloud, double t);

}  // namespace ltda::oracle
