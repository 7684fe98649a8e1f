#include "lsf/error.hpp"

namespace lsf {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::self_loop: return "self_loop";
    case ErrorCode::duplicate_edge: return "duplicate_edge";
    case ErrorCode::cutoff_violation: return "cutoff_violation";
    case ErrorCode::unknown_node: return "unknown_node";
    case ErrorCode::infeasible_spec: return "infeasible_spec";
    case ErrorCode::not_bracketed: return "not_bracketed";
    case ErrorCode::no_eligible_node: return "no_eligible_node";
    case ErrorCode::empty_degree_bucket: return "empty_degree_bucket";
    case ErrorCode::hop_cap_exceeded: return "hop_cap_exceeded";
    case ErrorCode::degenerate_histogram: return "degenerate_histogram";
    case ErrorCode::zero_expected_count: return "zero_expected_count";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::missing_series: return "missing_series";
  }
  return "unknown";
}

}  // namespace lsf
