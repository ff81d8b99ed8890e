#pragma once

// Hand-derived closed forms for ruled surfaces and the two quadric kinds,
// with cross-validation against the generic jet engine.
//
// Operator closed forms are compared as |closed - s * generic| against
// tol * (1 + |generic|), with one global sign s per pipeline taken from the
// pipeline's operator display. Geometric quantities (forms, normals,
// curvature, ruled invariants) are compared with s = +1.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "curvelab/identities.hpp"

namespace curvelab {

inline constexpr double kOperatorXvalTol = 1e-8;
inline constexpr double kFormXvalTol = 1e-10;

/// Coefficients in ascending powers of t.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double t) const;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// ---------------------------------------------------------------- ruled

struct RuledScalars {
  double s = 0.0;
  double t = 0.0;
  double q = 0.0;
  double p = 0.0;
  double A = 0.0;
  double k = 0.0;
  double l = 0.0;
  double m = 0.0;
  double n_coef = 0.0;
  double r = 0.0;
  double k_prime = 0.0;
  double l_prime = 0.0;
  double A_prime = 0.0;
  double q_s = 0.0;
  double q_t = 0.0;
  double p_t = 0.0;
  Eigen::Vector3d P = Eigen::Vector3d::Zero();  // sigma' x tau
  Eigen::Vector3d Q = Eigen::Vector3d::Zero();  // tau' x tau
  Eigen::Vector3d P_prime = Eigen::Vector3d::Zero();
  Eigen::Vector3d Q_prime = Eigen::Vector3d::Zero();
  /// Largest disagreement between q, p, A from the invariants and the same
  /// quantities recomputed from x = sigma + t tau directly.
  double consistency = 0.0;

  /// -A^2 / q^2.
  double K() const { return -A * A / (q * q); }
  /// (P + t Q) / sqrt(q).
  Eigen::Vector3d gauss_map() const;
};

/// Raises degenerate_ruling when |A| < 1e-12.
RuledScalars ruled_scalars(const CurvePair& curves, double s, double t);

/// f1..f4 of the Delta^II n expansion, in the operator sign of the printed
/// ruled-surface display.
struct FPolynomials {
  std::array<Polynomial, 4> f;
  std::string label;
  /// Largest least-squares residual of the fitted versions (0 for printed).
  double fit_residual = 0.0;
};

/// As printed. The unparseable token "3k'A3" in the t coefficient of f3 is
/// read as 3k'A.
FPolynomials ruled_f_polynomials(const CurvePair& curves, double s);

/// Recovered from the generic engine at fixed s by sampling the four
/// structure coefficients over the t range of the patch and fitting
/// polynomials (degree 5 for f1, 3 for the others), then multiplied by the
/// printed operator sign (-1) so they are directly comparable with the
/// printed versions.
FPolynomials ruled_f_polynomials_matched(const SurfacePatch& ruled_patch,
                                         double s,
                                         const EngineOptions& options = {});

/// Generic Delta^II n at (s0, t) decomposes as
///   c_Q Q(s0) + c_Q' Q'(s0) + c_P P(s0) + c_P' P'(s0)
/// with c_Q = Delta^II[t/sqrt q], c_Q' = Delta^II[t (s - s0)/sqrt q],
/// c_P = Delta^II[1/sqrt q], c_P' = Delta^II[(s - s0)/sqrt q].
struct RuledStructure {
  double c_Q = 0.0;
  double c_Q_prime = 0.0;
  double c_P = 0.0;
  double c_P_prime = 0.0;
};

RuledStructure ruled_structure(const SurfacePatch& ruled_patch,
                               const FrameData& frame);

struct RuledLaplacian {
  RuledScalars scalars;
  Eigen::Vector3d generic = Eigen::Vector3d::Zero();
  /// Printed second-form operator applied to the closed-form Gauss map.
  Eigen::Vector3d printed_operator = Eigen::Vector3d::Zero();
  /// (1/q^2)[f1 Q/A^2 + f2 Q'/A + f3 P/A^2 + f4 P'/A] with printed f's.
  Eigen::Vector3d printed_expansion = Eigen::Vector3d::Zero();
  /// The same assembly with the matched f's.
  Eigen::Vector3d matched_expansion = Eigen::Vector3d::Zero();
  RuledStructure structure;
  /// Printed f_i / (q^2 A^2) or / (q^2 A), in the order f1, f2, f3, f4,
  /// paired with c_Q, c_Q', c_P, c_P'.
  std::array<double, 4> printed_terms{};
  std::array<double, 4> generic_terms{};
  /// Sign s minimizing |printed_operator - s * generic|.
  int operator_sign = 1;
  bool sign_flipped = false;
  double operator_residual = 0.0;
  /// |generic - sum of the structure terms| / (1 + |generic|).
  double structure_residual = 0.0;
};

RuledLaplacian ruled_laplacian_gauss_map(const SurfacePatch& ruled_patch,
                                         double s, double t,
                                         const EngineOptions& options = {});

// ------------------------------------------------------------- quadrics

struct Quadric1Closed {
  double omega = 0.0;
  double Phi = 0.0;
  Tensor2 g = Tensor2::Zero();
  Tensor2 b = Tensor2::Zero();
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  Eigen::Vector3d n_u = Eigen::Vector3d::Zero();
  Eigen::Vector3d n_v = Eigen::Vector3d::Zero();
  /// Closed-form Delta^II n1, Delta^II n2.
  double lap_n1 = 0.0;
  double lap_n2 = 0.0;
  /// The printed second-form operator (with its third term read as
  /// coefficient times d^2/dv^2) applied to n1 and n2.
  double operator_n1 = 0.0;
  double operator_n2 = 0.0;
  /// The same operator with the sign of its mixed term reversed
  /// (+2uv d^2/dudv), which is what the engine reproduces.
  double corrected_operator_n1 = 0.0;
  double corrected_operator_n2 = 0.0;
};

Quadric1Closed quadric1_pipeline(double a, double b, double c, double u,
                                 double v);

struct Quadric2Closed {
  double g_det = 0.0;
  Tensor2 g = Tensor2::Zero();
  Tensor2 b = Tensor2::Zero();
  Tensor2 e = Tensor2::Zero();
  /// -2 u g and -2 v g.
  double lap_u = 0.0;
  double lap_v = 0.0;
  /// The printed third-form operator applied to u and v.
  double operator_u = 0.0;
  double operator_v = 0.0;
};

Quadric2Closed quadric2_pipeline(double a, double b, double u, double v);

// ---------------------------------------------------------- cross-checks

enum class Pipeline { ruled, quadric1, quadric2 };

std::string_view to_string(Pipeline pipeline) noexcept;
Pipeline parse_pipeline(std::string_view text);

struct Comparison {
  std::string quantity;
  /// True for operator quantities, compared under the pipeline sign.
  bool signed_operator = false;
  double tolerance = 0.0;
  double max_abs = 0.0;
  /// max |closed - s generic| / (1 + |generic|).
  double max_rel = 0.0;
  /// Sign that would minimize this comparison on its own.
  int best_sign = 1;
  bool pass = true;
  std::string note;
};

struct XvalReport {
  Pipeline pipeline = Pipeline::ruled;
  std::string surface;
  std::vector<SamplePoint> points;
  int operator_sign = 1;
  std::vector<Comparison> comparisons;
  std::vector<std::string> notes;

  bool all_pass() const;
  const Comparison& comparison(const std::string& quantity) const;
};

/// Runs the pipeline matching the patch kind at the given points.
XvalReport cross_validate(Pipeline pipeline, const SurfacePatch& patch,
                          const std::vector<SamplePoint>& points,
                          const EngineOptions& options = {});

}  // namespace curvelab
