#include "curvelab/errors.hpp"

namespace curvelab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::construction: return "construction";
    case ErrorKind::out_of_order: return "out_of_order";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::domain: return "domain";
    case ErrorKind::regularity: return "regularity";
    case ErrorKind::flat_point: return "flat_point";
    case ErrorKind::singular_form: return "singular_form";
    case ErrorKind::sampling: return "sampling";
    case ErrorKind::ill_posed_fit: return "ill_posed_fit";
    case ErrorKind::degenerate_ruling: return "degenerate_ruling";
  }
  return "unknown";
}

}  // namespace curvelab
