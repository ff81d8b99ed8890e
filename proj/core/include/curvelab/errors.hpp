#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvelab {

/// Classification of every failure the engine can raise. The CLI maps these
/// onto exit codes (configuration problems are usage errors, the rest are
/// numeric/domain errors).
enum class ErrorKind {
  configuration,     // bad option, order out of range, unknown surface
  construction,      // surface parameters violate the catalog preconditions
  out_of_order,      // derivative requested beyond the carried jet order
  singularity,       // division by a jet with vanishing constant term
  domain,            // sqrt of a nonpositive quantity, point outside domain
  regularity,        // x_u x x_v vanishes
  flat_point,        // |K| below k_min where II or III must be inverted
  singular_form,     // fundamental-form tensor not invertible
  sampling,          // not enough admissible sample points
  ill_posed_fit,     // least-squares design matrix too badly conditioned
  degenerate_ruling  // ruled surface with A = 0
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace curvelab
