#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsf {

enum class ErrorCode {
  invalid_argument,
  self_loop,
  duplicate_edge,
  cutoff_violation,
  unknown_node,
  infeasible_spec,
  not_bracketed,
  no_eligible_node,
  empty_degree_bucket,
  hop_cap_exceeded,
  degenerate_histogram,
  zero_expected_count,
  parse_error,
  io_error,
  missing_series,
};

/// Stable machine-readable name, printed by the CLI on failure.
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lsf
