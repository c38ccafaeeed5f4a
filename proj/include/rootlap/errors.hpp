#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rootlap {

enum class ErrorKind {
  io,
  config,
  parse,
  empty_input,
  invalid_param,
  dimension_mismatch,
  degenerate_graph,
  degenerate_input,
  degenerate_signal,
  degenerate_spectrum,
  convergence_failure,
  singular_metric,
  not_psd,
  zero_vector,
  all_zero_spectrum,
  component_too_small,
  numerical,
};

constexpr std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
    case ErrorKind::parse: return "parse";
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::invalid_param: return "invalid_param";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::degenerate_graph: return "degenerate_graph";
    case ErrorKind::degenerate_input: return "degenerate_input";
    case ErrorKind::degenerate_signal: return "degenerate_signal";
    case ErrorKind::degenerate_spectrum: return "degenerate_spectrum";
    case ErrorKind::convergence_failure: return "convergence_failure";
    case ErrorKind::singular_metric: return "singular_metric";
    case ErrorKind::not_psd: return "not_psd";
    case ErrorKind::zero_vector: return "zero_vector";
    case ErrorKind::all_zero_spectrum: return "all_zero_spectrum";
    case ErrorKind::component_too_small: return "component_too_small";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Non-fatal conditions (e.g. an epsilon graph without edges) are reported
/// through an optional callback instead of throwing.
using WarningSink = std::function<void(ErrorKind, std::string_view)>;

inline void warn(const WarningSink& sink, ErrorKind kind, std::string_view message) {
  if (sink) sink(kind, message);
}

}  // namespace rootlap
