#include "ginibeta/error.hpp"

namespace ginibeta {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::degenerate_sample: return "degenerate-sample";
    case ErrorKind::degenerate_weight: return "degenerate-weight";
    case ErrorKind::numeric_quality: return "numeric-quality";
    case ErrorKind::assumption_violation: return "assumption-violation";
    case ErrorKind::unstable_bootstrap: return "unstable-bootstrap";
    case ErrorKind::internal_inconsistency: return "internal-inconsistency";
    case ErrorKind::ingestion: return "ingestion";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::ingestion:
    case ErrorKind::invalid_parameter: return 2;
    case ErrorKind::assumption_violation: return 3;
    case ErrorKind::degenerate_sample:
    case ErrorKind::degenerate_weight:
    case ErrorKind::numeric_quality:
    case ErrorKind::unstable_bootstrap:
    case ErrorKind::internal_inconsistency: return 1;
  }
  return 1;
}

}  // namespace ginibeta
