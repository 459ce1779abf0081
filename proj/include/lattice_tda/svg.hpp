#pragma once

#include <string>

#include "lattice_tda/persistence.hpp"

namespace ltda {

struct SvgOptions {
  std::string title = "Persistence diagram";
  int histogram_bins = 20;
};

// Persistence diagram (birth on x, death on y, diagonal, 0D and 1D series,
// infinite 0D bars as triangles on the top edge) with histograms of 0D
// deaths and 1D lifetimes beside it. Output contains no timestamps.
std::string render_diagram_svg(const PersistenceDiagram& diagram,
                               const SvgOptions& options = {});

}  // namespace ltda
