#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ginibeta {

enum class ErrorKind {
  invalid_parameter,
  degenerate_sample,
  degenerate_weight,
  numeric_quality,
  assumption_violation,
  unstable_bootstrap,
  internal_inconsistency,
  ingestion,
  usage,
};

std::string_view error_kind_name(ErrorKind kind) noexcept;

// Process exit status used by the command-line tool for each error kind.
int exit_code_for(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ginibeta
