#pragma once

// Beltrami differential parameters of the fundamental forms.
//
//   first:   nabla^J(f, h) = a^ij f_/i h_/j
//   second:  Delta^J f     = -a^ij (f_/ij - C^k_ij f_/k)
//
// with (a^ij) the inverse of the form-J tensor and C its Christoffel symbols.
// The leading minus of the second parameter is the sign convention used
// everywhere in the engine; with it Delta^I x = -2 H n.

#include <functional>
#include <string>

#include <Eigen/Core>

#include "curvelab/forms.hpp"

namespace curvelab {

/// A scalar function on the parameter domain that can be expanded as a jet.
/// `evaluate(u, v, order)` returns a jet of at least min(order, capability)
/// order; geometry-derived fields lose orders to differentiation.
struct ScalarField {
  std::string label;
  std::function<Jet2(double u, double v, int order)> evaluate;
};

struct VectorField {
  std::string label;
  std::function<JetVec3(double u, double v, int order)> evaluate;
};

/// Field built from a closed-form expression in the parameters.
ScalarField parametric_field(std::string label,
                             std::function<Jet2(const Jet2&, const Jet2&)> f);

/// Geometry-derived fields: "K", "H", "x1", "x2", "x3", "n1", "n2", "n3".
ScalarField geometry_field(const SurfacePatch& patch, const std::string& name);

/// "x" (position) or "n" (Gauss map).
VectorField geometry_vector_field(const SurfacePatch& patch,
                                  const std::string& name);

double beltrami_first(Form form, const FrameData& frame, const Jet2& f,
                      const Jet2& h);

/// R^3-valued first parameter nabla^J(f, F) = a^ij f_/i F_/j.
Eigen::Vector3d beltrami_first(Form form, const FrameData& frame,
                               const Jet2& f, const JetVec3& field);

/// nabla^J(h, n) with the Gauss map derivatives taken from the frame.
Eigen::Vector3d beltrami_first_gauss_map(Form form, const FrameData& frame,
                                         const Jet2& h);

/// a^ij f_/i x_/j, a tangent vector in ambient coordinates.
Eigen::Vector3d grad(Form form, const FrameData& frame, const Jet2& f);

double laplacian_scalar(Form form, const FrameData& frame, const Jet2& f);

/// Componentwise laplacian_scalar.
Eigen::Vector3d laplacian_vector(Form form, const FrameData& frame,
                                 const JetVec3& field);

/// Delta^J n, using the Gauss map derivatives stored in the frame.
Eigen::Vector3d laplacian_gauss_map(Form form, const FrameData& frame);

/// Delta^J x, using the immersion partials stored in the frame.
Eigen::Vector3d laplacian_position(Form form, const FrameData& frame);

// Point-level conveniences that evaluate the frame and field themselves.

double beltrami_first(Form form, const SurfacePatch& patch,
                      const ScalarField& f, const ScalarField& h, double u,
                      double v, const EngineOptions& options = {});
Eigen::Vector3d grad(Form form, const SurfacePatch& patch,
                     const ScalarField& f, double u, double v,
                     const EngineOptions& options = {});
double laplacian_scalar(Form form, const SurfacePatch& patch,
                        const ScalarField& f, double u, double v,
                        const EngineOptions& options = {});
Eigen::Vector3d laplacian_vector(Form form, const SurfacePatch& patch,
                                 const VectorField& field, double u, double v,
                                 const EngineOptions& options = {});
Eigen::Vector3d laplacian_gauss_map(Form form, const SurfacePatch& patch,
                                    double u, double v,
                                    const EngineOptions& options = {});

/// Delta^II n - (1/2K) grad^I K - 2 H n. Vanishes identically on any surface
/// with K != 0.
Eigen::Vector3d gauss_map_identity_residual(const FrameData& frame);

}  // namespace curvelab
