#pragma once

// Pointwise residuals of the tensor and operator identities that hold on any
// surface with K != 0, aggregated over a sample set.

#include <string>
#include <utility>
#include <vector>

#include "curvelab/beltrami.hpp"

namespace curvelab {

using SamplePoint = std::pair<double, double>;

struct IdentityResidual {
  std::string name;
  double value = 0.0;  // normalized residual, compared against tolerance
  double tolerance = 0.0;
};

struct IdentityCheck {
  std::string name;
  std::string description;
  double tolerance = 0.0;
  double max_residual = 0.0;
  double rms_residual = 0.0;
  int samples = 0;
  /// Index of the sample attaining max_residual.
  int worst_sample = -1;
  bool pass = true;
};

struct IdentityReport {
  std::string surface;
  std::vector<SamplePoint> points;
  std::vector<IdentityCheck> checks;
  /// residuals[p][c] for point p and check c.
  std::vector<std::vector<double>> residuals;

  bool all_pass() const;
  const IdentityCheck& check(const std::string& name) const;
};

/// Normalized residual of Delta^II n = (1/2K) grad^I K + 2 H n, i.e.
/// |residual| / (1 + |Delta^II n|).
double gauss_map_identity_relative(const FrameData& frame);

/// Normalized residual of nabla^II(h, n) + grad^I h = 0 for a function with
/// parameter gradient dh.
double gradient_identity_relative(const FrameData& frame,
                                  const Eigen::Vector2d& dh);

/// All identity residuals at one frame, in a fixed order.
std::vector<IdentityResidual> identity_residuals(const FrameData& frame);

IdentityReport check_identities(const SurfacePatch& patch,
                                const std::vector<SamplePoint>& points,
                                const EngineOptions& options = {});

}  // namespace curvelab
