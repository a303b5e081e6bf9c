#pragma once

#include <stdexcept>
#include <string>

namespace petrov {

enum class ErrorKind {
  shape,              // dimension or layout mismatch
  contract,           // violated precondition (e.g. operator not self-adjoint)
  conditioning,       // numerically defective or ill-conditioned input
  cluster_ambiguity,  // eigenvalue clusters too close to separate
  tolerance_failure,  // a float-mode residual exceeded its tolerance
  out_of_scope,       // input outside the supported taxonomy (index not 1 or 2)
  taxonomy,           // block pattern with no label
  domain,             // point outside an example's domain
  degenerate_level,   // level value not regular (Phi(c) = 0)
  parse,              // malformed JSON / CLI input
  internal,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace petrov
