#include "curvelab/identities.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace curvelab {

namespace {

constexpr double kOperatorTol = 1e-8;
constexpr double kTensorTol = 1e-9;

struct CheckInfo {
  const char* name;
  const char* description;
  double tolerance;
};

// Order here is the column order of IdentityReport::residuals.
constexpr CheckInfo kChecks[] = {
    {"gauss_map_laplacian", "Delta^II n - (1/2K) grad^I K - 2Hn", kOperatorTol},
    {"gauss_map_connection", "Delta^II n - b^kr T^j_rj n_/k - 2Hn", kOperatorTol},
    {"gradient_K", "nabla^II(K, n) + grad^I K", kOperatorTol},
    {"gradient_H", "nabla^II(H, n) + grad^I H", kOperatorTol},
    {"gradient_x1", "nabla^II(x1, n) + grad^I x1", kOperatorTol},
    {"gradient_x2", "nabla^II(x2, n) + grad^I x2", kOperatorTol},
    {"gradient_x3", "nabla^II(x3, n) + grad^I x3", kOperatorTol},
    {"T_plus_Ttilde", "T + Ttilde", kTensorTol},
    {"mainardi_codazzi", "nabla^I_k b_ij - nabla^I_i b_jk", kTensorTol},
    {"mean_curvature_traces", "b_ij g^ij - e_ij b^ij", kTensorTol},
    {"third_form", "III - 2H II + K I", kTensorTol},
    {"position_laplacian", "Delta^I x + 2Hn", kTensorTol},
    {"T_covariant", "T + (1/2) b^kr nabla^I_r b_ij", kTensorTol},
    {"Ttilde_covariant", "Ttilde + (1/2) b^kr nabla^III_r b_ij", kTensorTol},
    {"contracted_Gamma", "Gamma^j_ij - g_/i / 2g", kTensorTol},
    {"contracted_Pi", "Pi^j_ij - b_/i / 2b", kTensorTol},
    {"log_K_derivative", "K_/k / K - b_/k / b + g_/k / g", kTensorTol},
};

double determinant_derivative(const Tensor2& a, const Tensor2& da) {
  return da(0, 0) * a(1, 1) + a(0, 0) * da(1, 1) - 2.0 * a(0, 1) * da(0, 1);
}

double scale_of(const Christoffel& c) { return 1.0 + max_abs(c); }

double christoffel_gap(const Christoffel& a, const Christoffel& b) {
  return std::max((a[0] - b[0]).cwiseAbs().maxCoeff(),
                  (a[1] - b[1]).cwiseAbs().maxCoeff());
}

}  // namespace

double gauss_map_identity_relative(const FrameData& frame) {
  const Eigen::Vector3d lap = laplacian_gauss_map(Form::II, frame);
  return gauss_map_identity_residual(frame).norm() / (1.0 + lap.norm());
}

double gradient_identity_relative(const FrameData& frame,
                                  const Eigen::Vector2d& dh) {
  const Eigen::Vector2d raised_ii = frame.inverse(Form::II) * dh;
  const Eigen::Vector3d first_ii =
      raised_ii(0) * frame.dn[0] + raised_ii(1) * frame.dn[1];
  const Eigen::Vector2d raised_i = frame.g_inv * dh;
  const Eigen::Vector3d grad_i = raised_i(0) * frame.x_u + raised_i(1) * frame.x_v;
  return (first_ii + grad_i).norm() / (1.0 + grad_i.norm());
}

std::vector<IdentityResidual> identity_residuals(const FrameData& frame) {
  std::vector<double> r;
  r.reserve(std::size(kChecks));

  const Eigen::Vector3d lap_n = laplacian_gauss_map(Form::II, frame);
  r.push_back(gauss_map_identity_relative(frame));

  Eigen::Vector3d connection_term = Eigen::Vector3d::Zero();
  for (int k = 0; k < 2; ++k) {
    for (int rr = 0; rr < 2; ++rr) {
      const double trace = frame.T[0](rr, 0) + frame.T[1](rr, 1);
      connection_term += frame.b_inv(k, rr) * trace * frame.dn[k];
    }
  }
  r.push_back((lap_n - connection_term - 2.0 * frame.H * frame.n).norm() /
              (1.0 + lap_n.norm()));

  r.push_back(gradient_identity_relative(frame, frame.dK));
  r.push_back(gradient_identity_relative(frame, frame.dH));
  for (int c = 0; c < 3; ++c) {
    r.push_back(gradient_identity_relative(
        frame, {frame.x_u(c), frame.x_v(c)}));
  }

  const DifferenceTensors d = difference_tensors(frame);
  const Christoffel sum = {d.T[0] + d.Ttilde[0], d.T[1] + d.Ttilde[1]};
  r.push_back(max_abs(sum) / (1.0 + std::max(max_abs(d.T), max_abs(d.Ttilde))));

  double db_scale = 0.0;
  for (const auto& m : frame.db) db_scale = std::max(db_scale, m.cwiseAbs().maxCoeff());
  r.push_back(mainardi_codazzi_residual(frame) / (1.0 + db_scale));

  const Curvatures c = curvatures(frame);
  r.push_back(std::abs(c.H - c.H_third) / (1.0 + std::abs(c.H)));

  const Tensor2 third = frame.e - 2.0 * frame.H * frame.b + frame.K * frame.g;
  r.push_back(third.cwiseAbs().maxCoeff() / (1.0 + frame.e.cwiseAbs().maxCoeff()));

  const Eigen::Vector3d lap_x = laplacian_position(Form::I, frame);
  r.push_back((lap_x + 2.0 * frame.H * frame.n).norm() / (1.0 + lap_x.norm()));

  r.push_back(christoffel_gap(d.T, d.T_covariant) / scale_of(d.T));
  r.push_back(christoffel_gap(d.Ttilde, d.Ttilde_covariant) /
              scale_of(d.Ttilde));

  const double det_g = frame.g.determinant();
  const double det_b = frame.b.determinant();
  double gamma_gap = 0.0;
  double pi_gap = 0.0;
  double log_gap = 0.0;
  double log_scale = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double dg = determinant_derivative(frame.g, frame.dg[i]);
    const double db = determinant_derivative(frame.b, frame.db[i]);
    const double gamma = frame.Gamma[0](i, 0) + frame.Gamma[1](i, 1);
    const double pi = frame.Pi[0](i, 0) + frame.Pi[1](i, 1);
    gamma_gap = std::max(gamma_gap, std::abs(gamma - dg / (2.0 * det_g)) /
                                        (1.0 + std::abs(gamma)));
    pi_gap = std::max(pi_gap,
                      std::abs(pi - db / (2.0 * det_b)) / (1.0 + std::abs(pi)));
    const double lhs = frame.dK(i) / frame.K;
    log_gap = std::max(log_gap, std::abs(lhs - db / det_b + dg / det_g));
    log_scale = std::max(log_scale, std::abs(lhs));
  }
  r.push_back(gamma_gap);
  r.push_back(pi_gap);
  r.push_back(log_gap / (1.0 + log_scale));

  std::vector<IdentityResidual> out;
  out.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.push_back({kChecks[i].name, r[i], kChecks[i].tolerance});
  }
  return out;
}

bool IdentityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const IdentityCheck& c) { return c.pass; });
}

const IdentityCheck& IdentityReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  fail(ErrorKind::configuration, "no identity check named '" + name + "'");
}

IdentityReport check_identities(const SurfacePatch& patch,
                                const std::vector<SamplePoint>& points,
                                const EngineOptions& options) {
  IdentityReport report;
  report.surface = patch.name();
  report.points = points;
  report.residuals.reserve(points.size());
  for (const auto& [u, v] : points) {
    const FrameData frame = evaluate_frame(patch, u, v, options);
    std::vector<double> row;
    for (const auto& res : identity_residuals(frame)) row.push_back(res.value);
    report.residuals.push_back(std::move(row));
  }

  for (std::size_t c = 0; c < std::size(kChecks); ++c) {
    IdentityCheck check;
    check.name = kChecks[c].name;
    check.description = kChecks[c].description;
    check.tolerance = kChecks[c].tolerance;
    check.samples = static_cast<int>(points.size());
    double sum_sq = 0.0;
    for (std::size_t p = 0; p < report.residuals.size(); ++p) {
      const double value = report.residuals[p][c];
      sum_sq += value * value;
      // NaN compares false, so it becomes (and stays) the worst value.
      if (check.worst_sample < 0 || !(value <= check.max_residual)) {
        if (!std::isnan(check.max_residual) || check.worst_sample < 0) {
          check.max_residual = value;
          check.worst_sample = static_cast<int>(p);
        }
      }
    }
    check.rms_residual =
        points.empty() ? 0.0 : std::sqrt(sum_sq / static_cast<double>(points.size()));
    check.pass = std::isfinite(check.max_residual) &&
                 check.max_residual <= check.tolerance;
    report.checks.push_back(std::move(check));
  }
  return report;
}

}  // namespace curvelab
