#pragma once

#include <stdexcept>
#include <string>

namespace ltda {

enum class Errc {
  invalid_spec,
  invalid_parameter,
  invalid_threshold,
  invalid_n,
  degenerate_extent,
  duplicate_point,
  insufficient_data,
  size_guard,
  bounds,
  empty_result,
  unit_mismatch,
  format,
  parse,
  internal_consistency,
};

const char* errc_name(Errc code) noexcept;

// Single exception type for the library; the code decides the category.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Process exit codes used by the command-line front end.
// 0 success, 2 usage, 3 input format, 4 computation, 5 internal consistency.
int exit_code_for(Errc code) noexcept;

}  // namespace ltda
