#pragma once

// Pointwise tensor geometry of a parametric surface: the three fundamental
// forms and their inverses, Gauss map, curvatures, the Christoffel symbols
// of each form, and the difference tensors T = Gamma - Pi, Ttilde = Lambda - Pi.
//
// Orientation is fixed globally: n = (x_u x x_v) / |x_u x x_v|. Reversing it
// maps b -> -b and H -> -H and leaves K, g and e unchanged.

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "curvelab/jet.hpp"
#include "curvelab/surfaces.hpp"

namespace curvelab {

enum class Form { I, II, III };

std::string_view to_string(Form form) noexcept;
Form parse_form(std::string_view text);

using Tensor2 = Eigen::Matrix2d;
/// Symbols C^k_ij, stored as symbols[k](i, j).
using Christoffel = std::array<Eigen::Matrix2d, 2>;
/// Partial derivatives of a 2-tensor: d[k](i, j) = a_ij/k.
using TensorGradient = std::array<Tensor2, 2>;

struct EngineOptions {
  int jet_order = kDefaultJetOrder;
  double k_min = 1e-8;
  /// Return frames with |K| < k_min instead of raising flat_point; the II/III
  /// inverses and Christoffel symbols are NaN in that case.
  bool allow_flat = false;
};

/// Jet-valued geometry at a point; the seed order N determines how many
/// derivatives survive: x has order N, x_/i, n and g order N-1, and b, e, K, H
/// order N-2.
struct SurfaceJets {
  int order = 0;
  JetVec3 x;
  std::array<JetVec3, 2> dx;
  JetVec3 n;
  std::array<std::array<Jet2, 2>, 2> g;
  std::array<std::array<Jet2, 2>, 2> b;
  std::array<std::array<Jet2, 2>, 2> e;
  Jet2 K;
  Jet2 H;
};

SurfaceJets surface_jets(const SurfacePatch& patch, double u, double v,
                         int order);

/// Unit normal (x_u x x_v)/|x_u x x_v| carried as a jet.
JetVec3 gauss_map(const JetVec3& x_u, const JetVec3& x_v);

struct FrameData {
  double u = 0.0;
  double v = 0.0;

  /// Partials of x through order 3, indexed by x_partial(i, j).
  std::array<Eigen::Vector3d, 10> x_partials;
  Eigen::Vector3d x;
  Eigen::Vector3d x_u;
  Eigen::Vector3d x_v;

  Eigen::Vector3d n;
  std::array<Eigen::Vector3d, 2> dn;                 // n_/i
  std::array<std::array<Eigen::Vector3d, 2>, 2> ddn;  // n_/ij

  Tensor2 g, b, e;
  Tensor2 g_inv, b_inv, e_inv;
  TensorGradient dg, db, de;

  double K = 0.0;
  double H = 0.0;
  Eigen::Vector2d dK = Eigen::Vector2d::Zero();
  Eigen::Vector2d dH = Eigen::Vector2d::Zero();
  /// sign(det b); the engine uses sqrt|det b| wherever a square root of the
  /// second-form determinant appears.
  double det_b_sign = 0.0;

  Christoffel Gamma, Pi, LambdaSym;
  Christoffel T, Ttilde;

  /// False when the frame was evaluated with allow_flat at a point where
  /// |K| < k_min.
  bool curved = true;

  const Eigen::Vector3d& x_partial(int i, int j) const;
  const Tensor2& tensor(Form form) const;
  const TensorGradient& tensor_gradient(Form form) const;
  const Tensor2& inverse(Form form) const;
  const Christoffel& christoffel(Form form) const;
};

FrameData evaluate_frame(const SurfacePatch& patch, double u, double v,
                         const EngineOptions& options = {});

struct Curvatures {
  double K = 0.0;
  double H = 0.0;
  /// H recomputed as (1/2) e_ij b^ij.
  double H_third = 0.0;
};

Curvatures curvatures(const FrameData& frame);

/// C^k_ij = (1/2) a^kr (-a_ij/r + a_ir/j + a_jr/i).
Christoffel christoffel(const Tensor2& inverse, const TensorGradient& gradient);

inline const Christoffel& christoffel(Form form, const FrameData& frame) {
  return frame.christoffel(form);
}

/// nabla_r a_ij = a_ij/r - C^m_ri a_mj - C^m_rj a_im, stored as [r](i, j).
TensorGradient covariant_derivative(const Tensor2& tensor,
                                    const TensorGradient& gradient,
                                    const Christoffel& connection);

struct DifferenceTensors {
  Christoffel T;       // Gamma - Pi
  Christoffel Ttilde;  // Lambda - Pi
  /// -(1/2) b^kr nabla^I_r b_ij and -(1/2) b^kr nabla^III_r b_ij.
  Christoffel T_covariant;
  Christoffel Ttilde_covariant;
};

DifferenceTensors difference_tensors(const FrameData& frame);

/// max over i, j, k of |nabla^I_k b_ij - nabla^I_i b_jk|.
double mainardi_codazzi_residual(const FrameData& frame);

double max_abs(const Christoffel& symbols);

}  // namespace curvelab
