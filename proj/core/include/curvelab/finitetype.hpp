#pragma once

// Coordinate finite type detection: least-squares fits of Delta^J n = Lambda n
// and Delta^J x = A x + B over a sample set, with verdicts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "curvelab/identities.hpp"

namespace curvelab {

enum class SamplingStrategy { grid, jittered };

std::string_view to_string(SamplingStrategy strategy) noexcept;
SamplingStrategy parse_strategy(std::string_view text);

inline constexpr int kMinSampleCount = 12;

struct SampleSet {
  std::vector<SamplePoint> points;
  SamplingStrategy strategy = SamplingStrategy::jittered;
  std::uint64_t seed = 0;
  int count = 0;
  /// Side of the lattice finally used (it grows when too many cells are
  /// inadmissible).
  int lattice = 0;
};

struct SamplingOptions {
  EngineOptions engine;
  /// Draws per cell before the cell is given up (jittered strategy).
  int max_retries = 16;
  /// Lattice growth steps before a sampling error is raised.
  int max_growth = 8;
};

/// Admissible, pairwise distinct sample points. The lattice has
/// ceil(sqrt(count)) cells per side; cells are visited row by row (u fastest)
/// and the first `count` admissible cells are kept. The grid strategy takes
/// the cell centre, the jittered one a uniform draw inside the cell.
SampleSet sample(const SurfacePatch& patch, SamplingStrategy strategy,
                 int count, std::uint64_t seed,
                 const SamplingOptions& options = {});

/// True when (u, v) is inside the domain, outside the exclusion zones and the
/// frame evaluates (|K| >= k_min unless the patch is flat).
bool admissible(const SurfacePatch& patch, double u, double v,
                const EngineOptions& options = {});

enum class Verdict { pass, fail, indeterminate };

std::string_view to_string(Verdict verdict) noexcept;

struct Thresholds {
  double tau_pass = 1e-6;
  double tau_fail = 1e-3;
  double max_condition = 1e8;
};

Verdict verdict_for(double residual_max_rel, const Thresholds& thresholds);

struct FitOptions {
  EngineOptions engine;
  Thresholds thresholds;
  /// Multiplies every operator value; -1 reproduces the opposite global
  /// sign convention.
  double operator_sign = 1.0;
  /// Threads used to evaluate samples. Results do not depend on it.
  int workers = 1;
};

struct MatrixFit {
  std::string target;  // "n" or "x"
  Form form = Form::II;
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  /// max_p |r_p| / max(1, max_p |Delta^J F(p)|).
  double residual_max_rel = 0.0;
  /// sqrt(mean_p |r_p|^2) with the same normalization.
  double residual_rms = 0.0;
  double condition_number = 0.0;
  Verdict verdict = Verdict::indeterminate;

  std::vector<SamplePoint> points;
  std::vector<Eigen::Vector3d> values;     // F(p)
  std::vector<Eigen::Vector3d> operator_values;  // Delta^J F(p)
  std::vector<Eigen::Vector3d> residuals;  // Delta^J F(p) - A F(p) - B
};

/// Row-wise least squares for Delta^J n = Lambda n.
MatrixFit fit_gauss_matrix(Form form, const SurfacePatch& patch,
                           const SampleSet& samples,
                           const FitOptions& options = {});

/// Row-wise least squares for Delta^J x = A x + B.
MatrixFit fit_position_affine(Form form, const SurfacePatch& patch,
                              const SampleSet& samples,
                              const FitOptions& options = {});

struct ClassifyOptions {
  SamplingStrategy strategy = SamplingStrategy::jittered;
  int count = 64;
  std::uint64_t seed = 0;
  FitOptions fit;
  int max_retries = 16;
};

struct Classification {
  std::string surface;
  Form form = Form::II;
  SampleSet samples;
  MatrixFit fit;
  /// For form II: |Delta^II n - (1/2K) grad^I K - 2Hn| / (1 + |Delta^II n|) at
  /// every sample.
  std::vector<double> gauss_map_identity;
  /// What the classification result for form II says about this surface;
  /// empty when it says nothing.
  std::optional<Verdict> expected;
  bool discrepancy = false;
  std::string note;
};

/// Expected form-II verdict for catalog kinds covered by the classification
/// result: spheres and helicoids satisfy Delta^II n = Lambda n, quadrics of
/// the first kind only for a = b = -1, quadrics of the second kind never.
std::optional<Verdict> expected_verdict(const SurfacePatch& patch, Form form);

Classification classify(const SurfacePatch& patch, Form form,
                        const ClassifyOptions& options = {});

}  // namespace curvelab
