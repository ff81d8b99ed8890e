#include "curvelab/finitetype.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include <Eigen/SVD>

namespace curvelab {

namespace {

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Fn>
void for_each_index(std::size_t n, int workers, Fn&& fn) {
  const std::size_t threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t end = std::min(n, (t + 1) * chunk);
        for (std::size_t i = t * chunk; i < end; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Evaluated {
  std::vector<Eigen::Vector3d> values;
  std::vector<Eigen::Vector3d> operator_values;
};

MatrixFit solve_rows(std::string target, Form form, const SampleSet& samples,
                     Evaluated data, bool affine, const FitOptions& options) {
  const auto n = static_cast<Eigen::Index>(data.values.size());
  const Eigen::Index cols = affine ? 4 : 3;
  Eigen::MatrixXd design(n, cols);
  Eigen::MatrixXd rhs(n, 3);
  for (Eigen::Index p = 0; p < n; ++p) {
    const auto idx = static_cast<std::size_t>(p);
    design.block(p, 0, 1, 3) = data.values[idx].transpose();
    if (affine) design(p, 3) = 1.0;
    rhs.row(p) = data.operator_values[idx].transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  MatrixFit fit;
  fit.target = std::move(target);
  fit.form = form;
  fit.condition_number =
      smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(fit.condition_number <= options.thresholds.max_condition)) {
    fail(ErrorKind::ill_posed_fit,
         "design matrix condition number " + std::to_string(fit.condition_number) +
             " exceeds " + std::to_string(options.thresholds.max_condition));
  }

  // Each row of the unknown matrix is an independent least-squares problem
  // sharing the design matrix.
  for (int row = 0; row < 3; ++row) {
    const Eigen::VectorXd coeffs = svd.solve(rhs.col(row));
    fit.matrix.row(row) = coeffs.head<3>().transpose();
    if (affine) fit.offset(row) = coeffs(3);
  }

  double max_norm = 0.0;
  double max_res = 0.0;
  double sum_sq = 0.0;
  fit.residuals.reserve(data.values.size());
  for (std::size_t p = 0; p < data.values.size(); ++p) {
    const Eigen::Vector3d r =
        data.operator_values[p] - fit.matrix * data.values[p] - fit.offset;
    fit.residuals.push_back(r);
    max_norm = std::max(max_norm, data.operator_values[p].norm());
    max_res = std::max(max_res, r.norm());
    sum_sq += r.squaredNorm();
  }
  const double scale = std::max(1.0, max_norm);
  fit.residual_max_rel = max_res / scale;
  fit.residual_rms =
      std::sqrt(sum_sq / static_cast<double>(std::max<std::size_t>(1, data.values.size()))) /
      scale;
  fit.verdict = verdict_for(fit.residual_max_rel, options.thresholds);
  fit.points = samples.points;
  fit.values = std::move(data.values);
  fit.operator_values = std::move(data.operator_values);
  return fit;
}

void require_samples(const SampleSet& samples) {
  if (static_cast<int>(samples.points.size()) < kMinSampleCount) {
    fail(ErrorKind::sampling, "fits need at least " +
                                  std::to_string(kMinSampleCount) +
                                  " samples, got " +
                                  std::to_string(samples.points.size()));
  }
}

}  // namespace

std::string_view to_string(SamplingStrategy strategy) noexcept {
  return strategy == SamplingStrategy::grid ? "grid" : "jittered-grid";
}

SamplingStrategy parse_strategy(std::string_view text) {
  if (text == "grid") return SamplingStrategy::grid;
  if (text == "jittered" || text == "jittered-grid") return SamplingStrategy::jittered;
  fail(ErrorKind::configuration, "unknown sampling strategy '" +
                                     std::string(text) +
                                     "' (grid or jittered-grid)");
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::indeterminate: return "INDETERMINATE";
  }
  return "?";
}

Verdict verdict_for(double residual_max_rel, const Thresholds& thresholds) {
  if (residual_max_rel <= thresholds.tau_pass) return Verdict::pass;
  if (residual_max_rel >= thresholds.tau_fail) return Verdict::fail;
  return Verdict::indeterminate;
}

bool admissible(const SurfacePatch& patch, double u, double v,
                const EngineOptions& options) {
  if (!patch.in_domain(u, v)) return false;
  try {
    (void)evaluate_frame(patch, u, v, options);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::regularity:
      case ErrorKind::flat_point:
      case ErrorKind::singular_form:
      case ErrorKind::domain:
        return false;
      default:
        throw;
    }
  }
  return true;
}

SampleSet sample(const SurfacePatch& patch, SamplingStrategy strategy,
                 int count, std::uint64_t seed, const SamplingOptions& options) {
  if (count < kMinSampleCount) {
    fail(ErrorKind::configuration, "sample count must be >= " +
                                       std::to_string(kMinSampleCount) +
                                       ", got " + std::to_string(count));
  }
  const Domain& d = patch.domain();
  int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));

  for (int growth = 0; growth <= options.max_growth; ++growth, ++side) {
    std::mt19937_64 rng(seed);
    SampleSet set;
    set.strategy = strategy;
    set.seed = seed;
    set.count = count;
    set.lattice = side;
    const double du = (d.u_max - d.u_min) / side;
    const double dv = (d.v_max - d.v_min) / side;
    for (int j = 0; j < side && static_cast<int>(set.points.size()) < count; ++j) {
      for (int i = 0; i < side && static_cast<int>(set.points.size()) < count; ++i) {
        const double u0 = d.u_min + i * du;
        const double v0 = d.v_min + j * dv;
        const int attempts =
            strategy == SamplingStrategy::grid ? 1 : std::max(1, options.max_retries);
        for (int a = 0; a < attempts; ++a) {
          double u = u0 + 0.5 * du;
          double v = v0 + 0.5 * dv;
          if (strategy == SamplingStrategy::jittered) {
            u = u0 + unit_draw(rng) * du;
            v = v0 + unit_draw(rng) * dv;
          }
          if (admissible(patch, u, v, options.engine)) {
            set.points.emplace_back(u, v);
            break;
          }
        }
      }
    }
    if (static_cast<int>(set.points.size()) == count) return set;
  }
  fail(ErrorKind::sampling, "could not find " + std::to_string(count) +
                                " admissible points on " + patch.name());
}

MatrixFit fit_gauss_matrix(Form form, const SurfacePatch& patch,
                           const SampleSet& samples, const FitOptions& options) {
  require_samples(samples);
  const std::size_t n = samples.points.size();
  Evaluated data{std::vector<Eigen::Vector3d>(n), std::vector<Eigen::Vector3d>(n)};
  const EngineOptions engine = options.engine;
  for_each_index(n, options.workers, [&](std::size_t p) {
    const auto [u, v] = samples.points[p];
    const FrameData frame = evaluate_frame(patch, u, v, engine);
    data.values[p] = frame.n;
    data.operator_values[p] =
        options.operator_sign * laplacian_gauss_map(form, frame);
  });
  return solve_rows("n", form, samples, std::move(data), false, options);
}

MatrixFit fit_position_affine(Form form, const SurfacePatch& patch,
                              const SampleSet& samples,
                              const FitOptions& options) {
  require_samples(samples);
  const std::size_t n = samples.points.size();
  Evaluated data{std::vector<Eigen::Vector3d>(n), std::vector<Eigen::Vector3d>(n)};
  const EngineOptions engine = options.engine;
  for_each_index(n, options.workers, [&](std::size_t p) {
    const auto [u, v] = samples.points[p];
    const FrameData frame = evaluate_frame(patch, u, v, engine);
    data.values[p] = frame.x;
    data.operator_values[p] =
        options.operator_sign * laplacian_position(form, frame);
  });
  return solve_rows("x", form, samples, std::move(data), true, options);
}

std::optional<Verdict> expected_verdict(const SurfacePatch& patch, Form form) {
  if (form != Form::II) return std::nullopt;
  switch (patch.kind()) {
    case SurfaceKind::sphere:
    case SurfaceKind::helicoid:
      return Verdict::pass;
    case SurfaceKind::quadric1:
      return patch.param("a") == -1.0 && patch.param("b") == -1.0
                 ? Verdict::pass
                 : Verdict::fail;
    case SurfaceKind::quadric2:
      return Verdict::fail;
    default:
      return std::nullopt;
  }
}

Classification classify(const SurfacePatch& patch, Form form,
                        const ClassifyOptions& options) {
  Classification c;
  c.surface = patch.name();
  c.form = form;
  SamplingOptions sampling;
  sampling.engine = options.fit.engine;
  sampling.max_retries = options.max_retries;
  c.samples = sample(patch, options.strategy, options.count, options.seed, sampling);
  c.fit = fit_gauss_matrix(form, patch, c.samples, options.fit);

  if (form == Form::II) {
    c.gauss_map_identity.resize(c.samples.points.size());
    const EngineOptions engine = options.fit.engine;
    for_each_index(c.samples.points.size(), options.fit.workers, [&](std::size_t p) {
      const auto [u, v] = c.samples.points[p];
      c.gauss_map_identity[p] =
          gauss_map_identity_relative(evaluate_frame(patch, u, v, engine));
    });
  }

  c.expected = expected_verdict(patch, form);
  if (c.expected && *c.expected != c.fit.verdict) {
    c.discrepancy = true;
    c.note = "verdict " + std::string(to_string(c.fit.verdict)) +
             " differs from the classification result, which predicts " +
             std::string(to_string(*c.expected)) + " for this surface";
  }
  return c;
}

}  // namespace curvelab
