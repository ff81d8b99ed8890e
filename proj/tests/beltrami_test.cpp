#include <cmath>

#include <doctest.h>

#include "curvelab/finitetype.hpp"
#include "oracles.hpp"
#include "suite.hpp"

using namespace curvelab;

namespace {

std::vector<SamplePoint> points_on(const SurfacePatch& patch, int count,
                                   std::uint64_t seed) {
  SamplingOptions opts;
  opts.engine.allow_flat = patch.flat();
  return sample(patch, SamplingStrategy::jittered, count, seed, opts).points;
}

const ScalarField coord_u = parametric_field("u", [](const Jet2& u, const Jet2&) { return u; });
const ScalarField coord_v = parametric_field("v", [](const Jet2&, const Jet2& v) { return v; });

template <class T>
T wave(const T& u, const T& v) {
  using std::sin;
  return sin(u + 2.0 * v) + u * v * v;
}

const ScalarField wave_field =
    parametric_field("wave", [](const Jet2& u, const Jet2& v) { return wave(u, v); });

}  // namespace

TEST_SUITE("beltrami") {

TEST_CASE("first parameter") {
  const EngineOptions flat{3, 1e-8, true};
  CHECK(beltrami_first(Form::I, plane(), coord_u, coord_u, 0.3, 0.4, flat) ==
        doctest::Approx(1.0));
  CHECK(beltrami_first(Form::I, sphere(1.0), coord_v, coord_v, 0.3, 0.4) ==
        doctest::Approx(1.0));
  const Eigen::Vector3d g = grad(Form::I, plane(), coord_u, 0.3, 0.4, flat);
  CHECK((g - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
}

TEST_CASE("gradient of the helicoid curvature") {
  const SurfacePatch h = helicoid(1.0);
  const ScalarField K = geometry_field(h, "K");
  for (double s : {0.0, 0.6, -2.0}) {
    const Eigen::Vector3d g = grad(Form::I, h, K, s, 1.0);
    CHECK((g - 0.5 * Eigen::Vector3d(std::cos(s), std::sin(s), 0)).norm() < 1e-12);
  }
}

TEST_CASE("second parameter examples") {
  const EngineOptions flat{3, 1e-8, true};
  CHECK(std::abs(laplacian_scalar(Form::I, plane(), coord_u, 0.2, 0.1, flat)) < 1e-15);

  const SurfacePatch h = helicoid(1.0);
  const ScalarField st = parametric_field("st", [](const Jet2& s, const Jet2& t) { return s * t; });
  for (auto [s, t] : {std::pair{0.3, 0.5}, std::pair{-1.0, 1.2}}) {
    const double q = t * t + 1.0;
    CHECK(laplacian_scalar(Form::II, h, st, s, t) ==
          doctest::Approx(-2.0 * std::sqrt(q)).epsilon(1e-12));
  }

  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    const SurfacePatch q = quadric2(a, b);
    for (const auto& [u, v] : points_on(q, 12, 5)) {
      const double g = 1 + a * a * u * u + b * b * v * v;
      CHECK(laplacian_scalar(Form::III, q, coord_u, u, v) ==
            doctest::Approx(-2 * u * g).epsilon(1e-10).scale(1.0));
      CHECK(laplacian_scalar(Form::III, q, coord_v, u, v) ==
            doctest::Approx(-2 * v * g).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("vector Laplacians") {
  const SurfacePatch s = sphere(1.0);
  for (const auto& [u, v] : points_on(s, 16, 2)) {
    const FrameData f = evaluate_frame(s, u, v);
    CHECK((laplacian_position(Form::I, f) - 2 * f.x).norm() < 1e-12);
    CHECK((laplacian_gauss_map(Form::II, f) + 2 * f.n).norm() < 1e-12);
    CHECK((laplacian_vector(Form::I, s, geometry_vector_field(s, "x"), u, v) - 2 * f.x)
              .norm() < 1e-12);
  }
  const SurfacePatch cat = catenoid();
  for (const auto& [u, v] : points_on(cat, 16, 2)) {
    CHECK(laplacian_position(Form::I, evaluate_frame(cat, u, v)).norm() < 1e-12);
  }
  const Eigen::Vector3d hel = laplacian_gauss_map(Form::II, helicoid(1.0), 0.0, 1.0);
  CHECK((hel - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-12);

  const SurfacePatch q = quadric1(-1, -1, 1);
  for (const auto& [u, v] : points_on(q, 16, 3)) {
    const FrameData f = evaluate_frame(q, u, v);
    CHECK((laplacian_gauss_map(Form::II, f) + 2 * f.n).norm() < 1e-11);
  }
}

TEST_CASE("Gauss map Laplacian matches the componentwise field path") {
  for (const auto& e : suite::curved()) {
    CAPTURE(e.label);
    const SurfacePatch patch = suite::build(e);
    const VectorField n = geometry_vector_field(patch, "n");
    for (const auto& [u, v] : points_on(patch, 12, 4)) {
      for (Form form : {Form::I, Form::II, Form::III}) {
        const Eigen::Vector3d a = laplacian_gauss_map(form, patch, u, v);
        EngineOptions order4;
        order4.jet_order = 4;
        const Eigen::Vector3d b = laplacian_vector(form, patch, n, u, v, order4);
        CHECK((a - b).norm() < 1e-9 * (1 + a.norm()));
      }
    }
  }
}

TEST_CASE("position Laplacian of the first form is -2Hn") {
  for (const auto& e : suite::curved()) {
    CAPTURE(e.label);
    const SurfacePatch patch = suite::build(e);
    for (const auto& [u, v] : points_on(patch, 20, 8)) {
      const FrameData f = evaluate_frame(patch, u, v);
      const Eigen::Vector3d lap = laplacian_position(Form::I, f);
      CHECK((lap + 2 * f.H * f.n).norm() < 1e-9 * (1 + lap.norm()));
    }
  }
}

TEST_CASE("linearity") {
  const SurfacePatch q = quadric1(2, 3, 1);
  const ScalarField K = geometry_field(q, "K");
  const ScalarField x3 = geometry_field(q, "x3");
  const double alpha = 1.7, beta = -0.6;
  for (const auto& [u, v] : points_on(q, 12, 6)) {
    const FrameData f = evaluate_frame(q, u, v);
    const Jet2 a = K.evaluate(u, v, 2);
    const Jet2 b = x3.evaluate(u, v, 2);
    const Jet2 w = wave_field.evaluate(u, v, 3);
    for (Form form : {Form::I, Form::II, Form::III}) {
      const double lhs = laplacian_scalar(form, f, alpha * a + beta * b + w);
      const double rhs = alpha * laplacian_scalar(form, f, a) +
                         beta * laplacian_scalar(form, f, b) + laplacian_scalar(form, f, w);
      CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(lhs)));
    }
  }
}

TEST_CASE("Christoffel form agrees with the divergence form") {
  const oracle::Fn plain = [](double u, double v) { return wave(u, v); };
  for (const auto& e : suite::curved()) {
    CAPTURE(e.label);
    const SurfacePatch patch = suite::build(e);
    for (const auto& [u, v] : points_on(patch, 12, 10)) {
      for (Form form : {Form::I, Form::II, Form::III}) {
        CAPTURE(to_string(form));
        CAPTURE(u);
        CAPTURE(v);
        const double jet = laplacian_scalar(form, patch, wave_field, u, v);
        const double fd = oracle::divergence_laplacian(form, patch, plain, u, v);
        CHECK(std::abs(jet - fd) < 1e-5 * (1 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("geometry fields") {
  const SurfacePatch q = quadric2(2, 3);
  const FrameData f = evaluate_frame(q, 0.2, -0.1);
  CHECK(geometry_field(q, "K").evaluate(0.2, -0.1, 2).value() == doctest::Approx(f.K));
  CHECK(geometry_field(q, "H").evaluate(0.2, -0.1, 2).value() == doctest::Approx(f.H));
  CHECK(geometry_field(q, "n3").evaluate(0.2, -0.1, 2).value() == doctest::Approx(f.n(2)));
  CHECK(geometry_field(q, "x1").evaluate(0.2, -0.1, 2).value() == doctest::Approx(0.2));
  CHECK_THROWS_AS(geometry_field(q, "w"), Error);
  CHECK(geometry_field(q, "K").evaluate(0.2, -0.1, 4).order() >= 2);
}

}  // TEST_SUITE
