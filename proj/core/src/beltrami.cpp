#include "curvelab/beltrami.hpp"

#include <algorithm>
#include <utility>

namespace curvelab {

namespace {

Eigen::Vector2d gradient_of(const Jet2& f) {
  return {f.partial(1, 0), f.partial(0, 1)};
}

Eigen::Matrix2d hessian_of(const Jet2& f) {
  Eigen::Matrix2d h;
  h(0, 0) = f.partial(2, 0);
  h(0, 1) = h(1, 0) = f.partial(1, 1);
  h(1, 1) = f.partial(0, 2);
  return h;
}

double second_parameter(const Tensor2& a_inv, const Christoffel& c,
                        const Eigen::Vector2d& df, const Eigen::Matrix2d& ddf) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double cov = ddf(i, j) - c[0](i, j) * df(0) - c[1](i, j) * df(1);
      sum += a_inv(i, j) * cov;
    }
  }
  return -sum;
}

Eigen::Vector3d ambient_gradient(const Tensor2& a_inv, const FrameData& frame,
                                 const Eigen::Vector2d& df) {
  const Eigen::Vector2d raised = a_inv * df;
  return raised(0) * frame.x_u + raised(1) * frame.x_v;
}

// Loss of jet order between the immersion seed and the named quantity.
int order_loss(const std::string& name) {
  if (name == "K" || name == "H") return 2;
  if (name == "n" || name == "n1" || name == "n2" || name == "n3") return 1;
  return 0;
}

int seed_order(int requested, int loss) {
  return std::clamp(requested + loss, kMinSeedOrder, kMaxJetOrder);
}

}  // namespace

ScalarField parametric_field(std::string label,
                             std::function<Jet2(const Jet2&, const Jet2&)> f) {
  ScalarField field;
  field.label = std::move(label);
  field.evaluate = [f = std::move(f)](double u, double v, int order) {
    const int n = std::clamp(order, kMinSeedOrder, kMaxJetOrder);
    return f(Jet2::seed(Variable::u, u, n), Jet2::seed(Variable::v, v, n));
  };
  return field;
}

ScalarField geometry_field(const SurfacePatch& patch, const std::string& name) {
  int component = -1;
  bool normal = false;
  if (name == "x1" || name == "x2" || name == "x3") {
    component = name[1] - '1';
  } else if (name == "n1" || name == "n2" || name == "n3") {
    component = name[1] - '1';
    normal = true;
  } else if (name != "K" && name != "H") {
    fail(ErrorKind::configuration,
         "unknown scalar field '" + name + "' (K, H, x1..x3, n1..n3)");
  }
  const int loss = order_loss(name);
  ScalarField field;
  field.label = name;
  field.evaluate = [patch, name, component, normal, loss](double u, double v,
                                                          int order) {
    const SurfaceJets s = surface_jets(patch, u, v, seed_order(order, loss));
    if (name == "K") return s.K;
    if (name == "H") return s.H;
    const auto c = static_cast<std::size_t>(component);
    return normal ? s.n[c] : s.x[c];
  };
  return field;
}

VectorField geometry_vector_field(const SurfacePatch& patch,
                                  const std::string& name) {
  if (name != "x" && name != "n") {
    fail(ErrorKind::configuration,
         "unknown vector field '" + name + "' (x or n)");
  }
  const int loss = order_loss(name);
  VectorField field;
  field.label = name;
  field.evaluate = [patch, name, loss](double u, double v, int order) {
    const SurfaceJets s = surface_jets(patch, u, v, seed_order(order, loss));
    return name == "x" ? s.x : s.n;
  };
  return field;
}

double beltrami_first(Form form, const FrameData& frame, const Jet2& f,
                      const Jet2& h) {
  return gradient_of(f).dot(frame.inverse(form) * gradient_of(h));
}

Eigen::Vector3d beltrami_first(Form form, const FrameData& frame,
                               const Jet2& f, const JetVec3& field) {
  const Eigen::Vector2d raised = frame.inverse(form) * gradient_of(f);
  return raised(0) * partial(field, 1, 0) + raised(1) * partial(field, 0, 1);
}

Eigen::Vector3d beltrami_first_gauss_map(Form form, const FrameData& frame,
                                         const Jet2& h) {
  const Eigen::Vector2d raised = frame.inverse(form) * gradient_of(h);
  return raised(0) * frame.dn[0] + raised(1) * frame.dn[1];
}

Eigen::Vector3d grad(Form form, const FrameData& frame, const Jet2& f) {
  return ambient_gradient(frame.inverse(form), frame, gradient_of(f));
}

double laplacian_scalar(Form form, const FrameData& frame, const Jet2& f) {
  if (f.order() < 2) {
    fail(ErrorKind::out_of_order,
         "the second Beltrami parameter needs a jet of order >= 2");
  }
  return second_parameter(frame.inverse(form), frame.christoffel(form),
                          gradient_of(f), hessian_of(f));
}

Eigen::Vector3d laplacian_vector(Form form, const FrameData& frame,
                                 const JetVec3& field) {
  return {laplacian_scalar(form, frame, field[0]),
          laplacian_scalar(form, frame, field[1]),
          laplacian_scalar(form, frame, field[2])};
}

Eigen::Vector3d laplacian_gauss_map(Form form, const FrameData& frame) {
  const Tensor2& a_inv = frame.inverse(form);
  const Christoffel& c = frame.christoffel(form);
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Eigen::Vector3d cov = frame.ddn[i][j] - c[0](i, j) * frame.dn[0] -
                                  c[1](i, j) * frame.dn[1];
      out -= a_inv(i, j) * cov;
    }
  }
  return out;
}

Eigen::Vector3d laplacian_position(Form form, const FrameData& frame) {
  const Tensor2& a_inv = frame.inverse(form);
  const Christoffel& c = frame.christoffel(form);
  const std::array<Eigen::Vector3d, 2> dx = {frame.x_u, frame.x_v};
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Eigen::Vector3d cov =
          frame.x_partial((i == 0) + (j == 0), (i == 1) + (j == 1)) -
          c[0](i, j) * dx[0] - c[1](i, j) * dx[1];
      out -= a_inv(i, j) * cov;
    }
  }
  return out;
}

double beltrami_first(Form form, const SurfacePatch& patch,
                      const ScalarField& f, const ScalarField& h, double u,
                      double v, const EngineOptions& options) {
  const FrameData frame = evaluate_frame(patch, u, v, options);
  return beltrami_first(form, frame, f.evaluate(u, v, 1), h.evaluate(u, v, 1));
}

Eigen::Vector3d grad(Form form, const SurfacePatch& patch,
                     const ScalarField& f, double u, double v,
                     const EngineOptions& options) {
  const FrameData frame = evaluate_frame(patch, u, v, options);
  return grad(form, frame, f.evaluate(u, v, 1));
}

double laplacian_scalar(Form form, const SurfacePatch& patch,
                        const ScalarField& f, double u, double v,
                        const EngineOptions& options) {
  const FrameData frame = evaluate_frame(patch, u, v, options);
  return laplacian_scalar(form, frame, f.evaluate(u, v, 2));
}

Eigen::Vector3d laplacian_vector(Form form, const SurfacePatch& patch,
                                 const VectorField& field, double u, double v,
                                 const EngineOptions& options) {
  const FrameData frame = evaluate_frame(patch, u, v, options);
  return laplacian_vector(form, frame, field.evaluate(u, v, 2));
}

Eigen::Vector3d laplacian_gauss_map(Form form, const SurfacePatch& patch,
                                    double u, double v,
                                    const EngineOptions& options) {
  return laplacian_gauss_map(form, evaluate_frame(patch, u, v, options));
}

Eigen::Vector3d gauss_map_identity_residual(const FrameData& frame) {
  const Eigen::Vector3d grad_k =
      ambient_gradient(frame.g_inv, frame, frame.dK);
  return laplacian_gauss_map(Form::II, frame) - grad_k / (2.0 * frame.K) -
         2.0 * frame.H * frame.n;
}

}  // namespace curvelab
