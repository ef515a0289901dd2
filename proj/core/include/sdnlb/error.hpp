#pragma once

#include <stdexcept>
#include <string>

namespace sdnlb {

enum class ErrorKind {
  invalid_argument,  // caller supplied an out-of-range parameter
  validation,        // a document or model failed structural checks
  not_found,         // a referenced id/cluster/server does not exist
  precondition,      // pipeline stage missing (no topology, no pools, ...)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sdnlb
