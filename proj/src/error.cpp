#include "petrov/error.hpp"

namespace petrov {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::shape: return "shape";
    case ErrorKind::contract: return "contract";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::cluster_ambiguity: return "cluster_ambiguity";
    case ErrorKind::tolerance_failure: return "tolerance_failure";
    case ErrorKind::out_of_scope: return "out_of_scope";
    case ErrorKind::taxonomy: return "taxonomy";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate_level: return "degenerate_level";
    case ErrorKind::parse: return "parse";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace petrov
