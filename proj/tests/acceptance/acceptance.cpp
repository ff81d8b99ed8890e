// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "curvelab/cli.hpp"
#include "oracles.hpp"
#include "suite.hpp"

using namespace curvelab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::vector<SamplePoint> jittered(const SurfacePatch& patch, int count, std::uint64_t seed = 0) {
  return sample(patch, SamplingStrategy::jittered, count, seed).points;
}

double mat_gap(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// 1. Delta^II n - (1/2K) grad^I K - 2Hn
Outcome gauss_map_identity() {
  double worst = 0;
  for (const auto& e : suite::curved()) {
    const SurfacePatch patch = suite::build(e);
    for (const auto& [u, v] : jittered(patch, 100)) {
      const FrameData f = evaluate_frame(patch, u, v);
      const double lap = laplacian_gauss_map(Form::II, f).norm();
      worst = std::max(worst, gauss_map_identity_residual(f).norm() / (1 + lap));
    }
  }
  return {worst <= 1e-8, "max relative residual " + sci(worst) + " over 10 surfaces x 100"};
}

// 2. nabla^II(h, n) + grad^I h
Outcome gradient_identity() {
  double worst = 0;
  for (const auto& e : suite::curved()) {
    const SurfacePatch patch = suite::build(e);
    std::vector<ScalarField> fields;
    for (const char* name : {"K", "H", "x1", "x2", "x3"}) {
      fields.push_back(geometry_field(patch, name));
    }
    for (const auto& [u, v] : jittered(patch, 100)) {
      const FrameData f = evaluate_frame(patch, u, v);
      for (const auto& h : fields) {
        const Jet2 jet = h.evaluate(u, v, 1);
        const Eigen::Vector3d g = grad(Form::I, f, jet);
        const Eigen::Vector3d r = beltrami_first_gauss_map(Form::II, f, jet) + g;
        worst = std::max(worst, r.norm() / (1 + g.norm()));
      }
    }
  }
  return {worst <= 1e-8, "max relative residual " + sci(worst) + " for h in {K, H, x1, x2, x3}"};
}

// 3. Tensor identities.
Outcome tensor_identities() {
  double t_sum = 0, codazzi = 0, traces = 0, cayley = 0;
  for (const auto& e : suite::curved()) {
    const SurfacePatch patch = suite::build(e);
    for (const auto& [u, v] : jittered(patch, 100)) {
      const FrameData f = evaluate_frame(patch, u, v);
      const DifferenceTensors d = difference_tensors(f);
      for (int k = 0; k < 2; ++k) {
        t_sum = std::max(t_sum, (d.T[k] + d.Ttilde[k]).cwiseAbs().maxCoeff() /
                                    (1 + max_abs(d.T)));
      }
      codazzi = std::max(codazzi, mainardi_codazzi_residual(f) /
                                      (1 + f.db[0].norm() + f.db[1].norm()));
      const double tr_g = (f.b * f.g_inv).trace();
      const double tr_e = (f.e * f.b_inv).trace();
      traces = std::max(traces, std::abs(tr_g - tr_e) / (1 + std::abs(tr_g)));
      cayley = std::max(cayley, (f.e - 2 * f.H * f.b + f.K * f.g).cwiseAbs().maxCoeff() /
                                    (1 + f.e.norm()));
    }
  }
  const double worst = std::max({t_sum, codazzi, traces, cayley});
  return {worst <= 1e-9, "T+Ttilde " + sci(t_sum) + ", Codazzi " + sci(codazzi) +
                             ", traces " + sci(traces) + ", III-2H II+K I " + sci(cayley)};
}

// 4. Sphere detection through the command layer.
Outcome sphere_detection() {
  cli::RunConfig cfg;
  cfg.command = "detect";
  cfg.surface = "sphere";
  cfg.params = {{"r", 1.0}};
  cfg.form = Form::II;
  const cli::CommandResult res = cli::execute(cfg);
  const auto& lambda = res.report["result"]["lambda"];
  Eigen::Matrix3d L;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) L(i, j) = lambda[i][j].get<double>();
  }
  const double gap = mat_gap(L, -2 * Eigen::Matrix3d::Identity());
  const double residual = res.report["result"]["residual_max_rel"].get<double>();
  bool ok = res.exit_code == cli::kExitOk && gap <= 1e-8 && residual <= 1e-10;
  double radius_gap = 0;
  for (double r : {0.5, 2.0, 3.0}) {
    const Classification c = classify(sphere(r), Form::II);
    radius_gap = std::max(radius_gap, mat_gap(c.fit.matrix, (-2 / r) * Eigen::Matrix3d::Identity()));
    ok = ok && c.fit.verdict == Verdict::pass;
  }
  ok = ok && radius_gap <= 1e-8;
  return {ok, "|Lambda+2I| " + sci(gap) + ", residual " + sci(residual) +
                  ", radius r: |Lambda+(2/r)I| " + sci(radius_gap)};
}

// 5. Quadric classification across seeds.
Outcome quadric_classification() {
  bool ok = true;
  double min_fail = INFINITY, max_pass = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ClassifyOptions opts;
    opts.seed = seed;
    const Classification pass = classify(quadric1(-1, -1, 1), Form::II, opts);
    ok = ok && pass.fit.verdict == Verdict::pass;
    max_pass = std::max(max_pass, pass.fit.residual_max_rel);
    for (const SurfacePatch& patch : {quadric1(1, 1, 1), quadric1(-1, 2, 1), quadric2(1, 1),
                                      quadric2(2, 3)}) {
      const Classification c = classify(patch, Form::II, opts);
      ok = ok && c.fit.verdict == Verdict::fail && c.fit.residual_max_rel >= 1e-2;
      min_fail = std::min(min_fail, c.fit.residual_max_rel);
    }
  }
  return {ok, "PASS residual <= " + sci(max_pass) + ", smallest FAIL residual " + sci(min_fail) +
                  ", seeds 0-4"};
}

// 6. Third-form Laplacian of the paraboloid coordinates.
Outcome paraboloid_third_form() {
  const SurfacePatch patch = quadric2(1, 1, Domain{-1, 1, -1, 1});
  const auto grid = sample(patch, SamplingStrategy::grid, 100, 0).points;
  const XvalReport rep = cross_validate(Pipeline::quadric2, patch, grid);
  const Comparison& u = rep.comparison("laplacian_u");
  const Comparison& v = rep.comparison("laplacian_v");
  const bool ok = u.pass && v.pass && u.best_sign == v.best_sign && grid.size() == 100;
  return {ok, "10x10 grid, sign " + std::to_string(rep.operator_sign) + ", max rel " +
                  sci(std::max(u.max_rel, v.max_rel))};
}

// 7. Ruled cross-validation.
Outcome ruled_crossvalidation() {
  const SurfacePatch h = helicoid(1.0);
  const Eigen::Vector3d base = laplacian_gauss_map(Form::II, evaluate_frame(h, 0.0, 1.0));
  const double base_gap = (base - Eigen::Vector3d(-1, 0, 0)).cwiseAbs().maxCoeff();

  double k_gap = 0;
  std::vector<SurfacePatch> pairs = {h};
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    pairs.push_back(make_surface({"ruled", {{"seed", double(seed)}}, {}}));
  }
  for (const auto& patch : pairs) {
    for (const auto& [s, t] : jittered(patch, 25, 1)) {
      const double K = evaluate_frame(patch, s, t).K;
      k_gap = std::max(k_gap, std::abs(ruled_scalars(*patch.curves(), s, t).K() - K) /
                                  (1 + std::abs(K)));
    }
  }

  // One global sign must reconcile both the f2 and the f4 terms.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ds(h.domain().u_min, h.domain().u_max);
  std::uniform_real_distribution<double> dt(h.domain().v_min, h.domain().v_max);
  double best = INFINITY;
  int best_sign = 0;
  std::array<std::array<double, 2>, 2> gaps{};
  for (int sign : {1, -1}) {
    double worst = 0;
    std::mt19937_64 local = rng;
    for (int i = 0; i < 25; ++i) {
      const double s = ds(local), t = dt(local);
      const RuledLaplacian lap = ruled_laplacian_gauss_map(h, s, t);
      for (int term : {1, 3}) {
        const double g = lap.generic_terms[term];
        const double rel = std::abs(lap.printed_terms[term] - sign * g) / (1 + std::abs(g));
        gaps[sign > 0 ? 0 : 1][term == 1 ? 0 : 1] =
            std::max(gaps[sign > 0 ? 0 : 1][term == 1 ? 0 : 1], rel);
        worst = std::max(worst, rel);
      }
    }
    if (worst < best) {
      best = worst;
      best_sign = sign;
    }
  }
  const bool ok = base_gap <= 1e-9 && k_gap <= 1e-10 && best <= 1e-8;
  std::ostringstream d;
  d << "Delta^II n(0,1) gap " << sci(base_gap) << ", K gap " << sci(k_gap)
    << " on 5 pairs, f2/f4 best sign " << best_sign << " residual " << sci(best)
    << " (f2: +1 " << sci(gaps[0][0]) << " -1 " << sci(gaps[1][0]) << "; f4: +1 "
    << sci(gaps[0][1]) << " -1 " << sci(gaps[1][1]) << ")";
  return {ok, d.str()};
}

// 8. Position finite type under the first form.
Outcome position_finite_type() {
  auto fit = [](const SurfacePatch& patch) {
    FitOptions opts;
    opts.engine.allow_flat = patch.flat();
    SamplingOptions so;
    so.engine = opts.engine;
    return fit_position_affine(Form::I, patch,
                               sample(patch, SamplingStrategy::jittered, 64, 0, so), opts);
  };
  const MatrixFit cat = fit(catenoid());
  const MatrixFit cyl = fit(cylinder(1.0));
  double gap = std::max(cat.matrix.cwiseAbs().maxCoeff(), cat.offset.cwiseAbs().maxCoeff());
  gap = std::max(gap, mat_gap(cyl.matrix, Eigen::Vector3d(1, 1, 0).asDiagonal().toDenseMatrix()));
  gap = std::max(gap, cyl.offset.cwiseAbs().maxCoeff());
  bool ok = cat.verdict == Verdict::pass && cyl.verdict == Verdict::pass;
  for (double r : {0.5, 1.0, 2.0}) {
    const MatrixFit s = fit(sphere(r));
    gap = std::max(gap, mat_gap(s.matrix, (2 / (r * r)) * Eigen::Matrix3d::Identity()));
    ok = ok && s.verdict == Verdict::pass;
  }
  ok = ok && gap <= 1e-8;
  return {ok, "max entry error " + sci(gap) + " (catenoid, cylinder, spheres)"};
}

// 9. Christoffel form against the finite-difference divergence form.
Outcome oracle_equivalence() {
  const oracle::Fn plain = [](double u, double v) { return std::sin(u + 2 * v) + u * v * v; };
  const ScalarField field = parametric_field(
      "wave", [](const Jet2& u, const Jet2& v) { return sin(u + 2.0 * v) + u * v * v; });
  double worst = 0;
  for (const auto& e : suite::curved()) {
    const SurfacePatch patch = suite::build(e);
    for (const auto& [u, v] : jittered(patch, 50, 2)) {
      for (Form form : {Form::I, Form::II}) {
        const double jet = laplacian_scalar(form, patch, field, u, v);
        const double fd = oracle::divergence_laplacian(form, patch, plain, u, v);
        worst = std::max(worst, std::abs(jet - fd) / (1 + std::abs(fd)));
      }
    }
  }
  return {worst <= 1e-5, "max relative gap " + sci(worst) + ", forms I and II"};
}

// 10. Helicoid verdict with the discrepancy flag.
Outcome helicoid_report() {
  cli::RunConfig cfg;
  cfg.command = "detect";
  cfg.surface = "helicoid";
  cfg.form = Form::II;
  const cli::CommandResult res = cli::execute(cfg);
  const auto& r = res.report["result"];
  const std::string verdict = r["verdict"];
  const bool flag = r["discrepancy"];
  const bool channel = r.contains("gauss_map_identity") &&
                       r["gauss_map_identity"]["max_relative_residual"].get<double>() <= 1e-8;
  const bool logic = verdict == "FAIL" ? flag : (verdict == "PASS" ? !flag : true);
  return {channel && logic, "verdict " + verdict + ", discrepancy " +
                                (flag ? "flagged" : "not flagged") + ", sanity channel " +
                                (channel ? "attached" : "missing")};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, gauss_map_identity},     {2, gradient_identity},       {3, tensor_identities},
      {4, sphere_detection},       {5, quadric_classification}, {6, paraboloid_third_form},
      {7, ruled_crossvalidation},  {8, position_finite_type},   {9, oracle_equivalence},
      {10, helicoid_report},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
