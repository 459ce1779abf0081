#include "lattice_tda/error.hpp"

namespace ltda {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_spec: return "invalid-spec";
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::invalid_threshold: return "invalid-threshold";
    case Errc::invalid_n: return "invalid-n";
    case Errc::degenerate_extent: return "degenerate-extent";
    case Errc::duplicate_point: return "duplicate-point";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::size_guard: return "size-guard";
    case Errc::bounds: return "bounds";
    case Errc::empty_result: return "empty-result";
    case Errc::unit_mismatch: return "unit-mismatch";
    case Errc::format: return "format";
    case Errc::parse: return "parse";
    case Errc::internal_consistency: return "internal-consistency";
  }
  return "unknown";
}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_spec:
    case Errc::invalid_parameter:
    case Errc::invalid_threshold:
    case Errc::invalid_n:
      return 2;
    case Errc::bounds:
    case Errc::unit_mismatch:
    case Errc::format:
    case Errc::parse:
      return 3;
    case Errc::degenerate_extent:
    case Errc::duplicate_point:
    case Errc::insufficient_data:
    case Errc::size_guard:
    case Errc::empty_result:
      return 4;
    case Errc::internal_consistency:
      return 5;
  }
  return 5;
}

}  // namespace ltda
