#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <doctest.h>

#include "curvelab/finitetype.hpp"
#include "oracles.hpp"
#include "suite.hpp"

using namespace curvelab;

namespace {

double max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

std::vector<SamplePoint> points_on(const SurfacePatch& patch, int count,
                                   std::uint64_t seed) {
  SamplingOptions opts;
  opts.engine.allow_flat = patch.flat();
  return sample(patch, SamplingStrategy::jittered, count, seed, opts).points;
}

}  // namespace

TEST_SUITE("forms") {

TEST_CASE("unit sphere at the origin of the chart") {
  const FrameData f = evaluate_frame(sphere(1.0), 0.0, 0.0);
  CHECK(max_diff(f.g, Eigen::Matrix2d::Identity()) < 1e-14);
  CHECK(max_diff(f.b, -Eigen::Matrix2d::Identity()) < 1e-14);
  CHECK((f.n - Eigen::Vector3d(1, 0, 0)).norm() < 1e-14);
  CHECK(f.K == doctest::Approx(1.0));
  CHECK(f.H == doctest::Approx(-1.0));
  CHECK(f.det_b_sign == 1.0);
}

TEST_CASE("sphere normal is the position") {
  const SurfacePatch s = sphere(1.0);
  for (const auto& [u, v] : points_on(s, 25, 3)) {
    const FrameData f = evaluate_frame(s, u, v);
    CHECK((f.n - f.x).norm() < 1e-13);
    CHECK(f.K == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.H == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("helicoid") {
  const SurfacePatch h = helicoid(1.0);
  for (double t : {-1.2, -0.3, 0.5, 1.0}) {
    const double s = 0.8;
    const FrameData f = evaluate_frame(h, s, t);
    const Eigen::Matrix2d g{{t * t + 1, 0}, {0, 1}};
    CHECK(max_diff(f.g, g) < 1e-14);
    const Eigen::Vector3d n =
        Eigen::Vector3d(-std::sin(s), std::cos(s), -t) / std::sqrt(1 + t * t);
    CHECK((f.n - n).norm() < 1e-14);
    CHECK(f.K == doctest::Approx(-1.0 / ((1 + t * t) * (1 + t * t))));
    CHECK(std::abs(f.H) < 1e-14);
    CHECK(f.det_b_sign == -1.0);
  }
  const FrameData f = evaluate_frame(h, 0.3, 1.0);
  CHECK(f.K == doctest::Approx(-0.25));

  const SurfacePatch h2 = helicoid(2.5);
  const FrameData f2 = evaluate_frame(h2, 0.3, -0.7);
  const double c = 2.5, t = -0.7;
  const Eigen::Vector3d n =
      Eigen::Vector3d(-c * std::sin(0.3), c * std::cos(0.3), -t) / std::sqrt(c * c + t * t);
  CHECK((f2.n - n).norm() < 1e-14);
}

TEST_CASE("quadric of the second kind") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    const SurfacePatch q = quadric2(a, b);
    for (const auto& [u, v] : points_on(q, 16, 1)) {
      const FrameData f = evaluate_frame(q, u, v);
      const double g = 1 + a * a * u * u + b * b * v * v;
      CHECK(f.b(0, 0) == doctest::Approx(a / std::sqrt(g)).epsilon(1e-13));
      CHECK(f.b(1, 1) == doctest::Approx(b / std::sqrt(g)).epsilon(1e-13));
      CHECK(std::abs(f.b(0, 1)) < 1e-14);
      CHECK(f.K == doctest::Approx(a * b / (g * g)).epsilon(1e-12));
      const double H = (a * (1 + b * b * v * v) + b * (1 + a * a * u * u)) /
                       (2 * std::pow(g, 1.5));
      CHECK(f.H == doctest::Approx(H).epsilon(1e-12));
    }
  }
}

TEST_CASE("quadric of the first kind normal") {
  for (auto [a, b, c] : {std::tuple{-1.0, -1.0, 1.0}, std::tuple{2.0, 3.0, 1.0},
                         std::tuple{1.0, 1.0, 1.0}}) {
    const SurfacePatch q = quadric1(a, b, c);
    for (const auto& [u, v] : points_on(q, 16, 2)) {
      const FrameData f = evaluate_frame(q, u, v);
      const double w = c + a * u * u + b * v * v;
      const double phi = c + a * (a + 1) * u * u + b * (b + 1) * v * v;
      const Eigen::Vector3d n = Eigen::Vector3d(-a * u, -b * v, std::sqrt(w)) / std::sqrt(phi);
      CHECK(std::min((f.n - n).norm(), (f.n + n).norm()) < 1e-13);
    }
  }
}

TEST_CASE("pointwise frame invariants on the suite") {
  for (const auto& e : suite::curved()) {
    CAPTURE(e.label);
    const SurfacePatch patch = suite::build(e);
    for (const auto& [u, v] : points_on(patch, 20, 7)) {
      const FrameData f = evaluate_frame(patch, u, v);
      CHECK(std::abs(f.n.norm() - 1.0) < 1e-12);
      CHECK(std::abs(f.n.dot(f.x_u)) < 1e-10 * (1 + f.x_u.norm()));
      CHECK(std::abs(f.n.dot(f.x_v)) < 1e-10 * (1 + f.x_v.norm()));
      CHECK(std::abs(f.K - f.b.determinant() / f.g.determinant()) <= 1e-10 * std::abs(f.K));
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          CHECK(std::abs(f.e(i, j) - f.dn[i].dot(f.dn[j])) < 1e-10 * (1 + f.e.norm()));
        }
      }
      CHECK(f.g(0, 1) == f.g(1, 0));
      CHECK(f.b(0, 1) == f.b(1, 0));
      CHECK(f.e(0, 1) == f.e(1, 0));
      // III - 2H II + K I = 0
      const Eigen::Matrix2d cayley = f.e - 2 * f.H * f.b + f.K * f.g;
      CHECK(cayley.cwiseAbs().maxCoeff() < 1e-9 * (1 + f.e.norm()));
      const Curvatures c = curvatures(f);
      CHECK(std::abs(c.H - c.H_third) < 1e-9 * (1 + std::abs(c.H)));
    }
  }
}

TEST_CASE("tensors agree with finite differences of the immersion") {
  for (const auto& e : suite::curved()) {
    CAPTURE(e.label);
    const SurfacePatch patch = suite::build(e);
    for (const auto& [u, v] : points_on(patch, 12, 9)) {
      const FrameData f = evaluate_frame(patch, u, v);
      const oracle::Forms fd = oracle::forms_fd(patch, u, v);
      const double scale = 1 + f.g.norm() + f.b.norm() + f.e.norm();
      CHECK(max_diff(f.g, fd.g) < 1e-7 * scale);
      CHECK(max_diff(f.b, fd.b) < 1e-7 * scale);
      CHECK(max_diff(f.e, fd.e) < 1e-6 * scale);
      CHECK((f.n - fd.n).norm() < 1e-9);
    }
  }
}

TEST_CASE("scaling law") {
  std::mt19937_64 rng(2024);
  for (const SurfacePatch& base : {sphere(1.0), quadric2(2, 3)}) {
    for (double lambda : {0.5, 3.0}) {
      const SurfacePatch scaled =
          transformed(base, lambda * Eigen::Matrix3d::Identity());
      auto pts = points_on(base, 12, rng());
      pts.resize(10);
      for (const auto& [u, v] : pts) {
        const FrameData a = evaluate_frame(base, u, v);
        const FrameData b = evaluate_frame(scaled, u, v);
        CHECK(max_diff(b.g, lambda * lambda * a.g) < 1e-9 * (1 + b.g.norm()));
        CHECK(max_diff(b.b, lambda * a.b) < 1e-9 * (1 + b.b.norm()));
        CHECK(std::abs(b.K - a.K / (lambda * lambda)) < 1e-9 * (1 + std::abs(b.K)));
        CHECK(std::abs(b.H - a.H / lambda) < 1e-9 * (1 + std::abs(b.H)));
        CHECK((b.n - a.n).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("Christoffel symbols") {
  const FrameData p = evaluate_frame(plane(), 0.3, -0.2, {3, 1e-8, true});
  CHECK(max_abs(p.Gamma) == 0.0);
  CHECK(max_abs(christoffel(Form::I, p)) == 0.0);
  CHECK_THROWS_AS(christoffel(Form::II, p), Error);

  const SurfacePatch s = sphere(1.0);
  for (const auto& [u, v] : points_on(s, 12, 0)) {
    const FrameData f = evaluate_frame(s, u, v);
    for (int k = 0; k < 2; ++k) {
      CHECK(max_diff(f.Pi[k], f.Gamma[k]) < 1e-12);
    }
    const DifferenceTensors d = difference_tensors(f);
    CHECK(max_abs(d.T) < 1e-12);
  }
}

TEST_CASE("contracted trace, T + Ttilde and Mainardi-Codazzi on the suite") {
  for (const auto& e : suite::curved()) {
    CAPTURE(e.label);
    const SurfacePatch patch = suite::build(e);
    for (const auto& [u, v] : points_on(patch, 20, 13)) {
      const FrameData f = evaluate_frame(patch, u, v);
      const double det = f.b.determinant();
      for (int i = 0; i < 2; ++i) {
        // d_i det b via Jacobi's formula on the frame's tensor gradient.
        const double ddet = det * (f.b_inv * f.db[i]).trace();
        const double trace = f.Pi[0](i, 0) + f.Pi[1](i, 1);
        CHECK(std::abs(trace - ddet / (2 * det)) < 1e-9 * (1 + std::abs(trace)));
      }
      const DifferenceTensors d = difference_tensors(f);
      double sum = 0;
      for (int k = 0; k < 2; ++k) sum = std::max(sum, (d.T[k] + d.Ttilde[k]).cwiseAbs().maxCoeff());
      CHECK(sum < 1e-9 * (1 + max_abs(d.T)));
      CHECK(mainardi_codazzi_residual(f) < 1e-9 * (1 + f.db[0].norm() + f.db[1].norm()));
    }
  }
}

TEST_CASE("errors") {
  const SurfacePatch cyl = cylinder(1.0);
  try {
    evaluate_frame(cyl, 0.1, 0.2);
    FAIL("flat point");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::flat_point);
  }
  const FrameData flat = evaluate_frame(cyl, 0.1, 0.2, {3, 1e-8, true});
  CHECK_FALSE(flat.curved);
  CHECK(std::isnan(flat.b_inv(0, 0)));
  try {
    (void)flat.inverse(Form::III);
    FAIL("singular form");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_form);
  }

  // x_v vanishes along v = 0.
  const SurfacePatch cusp("cusp", SurfaceKind::monge, {}, Domain{-1, 1, -1, 1},
                          [](const Jet2& u, const Jet2& v) -> JetVec3 {
                            return {u, v * v * v, u * u + v * v * v};
                          });
  try {
    evaluate_frame(cusp, 0.2, 0.0);
    FAIL("regularity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::regularity);
  }
  try {
    evaluate_frame(sphere(1.0), 0.1, 0.1, {5, 1e-8, false});
    FAIL("order");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
  try {
    evaluate_frame(quadric2(1, 1), 5.0, 0.0);
    FAIL("outside the domain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("order four refines nothing at order-three quantities") {
  const SurfacePatch q = quadric1(2, 3, 1);
  const FrameData a = evaluate_frame(q, 0.1, -0.15, {3, 1e-8, false});
  const FrameData b = evaluate_frame(q, 0.1, -0.15, {4, 1e-8, false});
  CHECK(max_diff(a.b, b.b) < 1e-14);
  CHECK(max_abs(a.Pi) == doctest::Approx(max_abs(b.Pi)).epsilon(1e-13));
  CHECK((a.ddn[0][1] - b.ddn[0][1]).norm() < 1e-12);
}

TEST_CASE("form names") {
  CHECK(parse_form("II") == Form::II);
  CHECK(parse_form("3") == Form::III);
  CHECK(to_string(Form::I) == "I");
  CHECK_THROWS_AS(parse_form("IV"), Error);
}

}  // TEST_SUITE
