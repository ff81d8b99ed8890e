#include "curvelab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

namespace curvelab {

namespace {

constexpr double kRegularityFloor = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Position of (i, j) in the degree-grouped partial array.
constexpr int partial_index(int i, int j) {
  const int d = i + j;
  return d * (d + 1) / 2 + j;
}

constexpr Variable axis(int k) { return k == 0 ? Variable::u : Variable::v; }

double first_partial(const Jet2& f, int k) {
  return k == 0 ? f.partial(1, 0) : f.partial(0, 1);
}

Tensor2 values(const std::array<std::array<Jet2, 2>, 2>& t) {
  Tensor2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = t[i][j].value();
  return out;
}

TensorGradient gradients(const std::array<std::array<Jet2, 2>, 2>& t) {
  TensorGradient out;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out[k](i, j) = first_partial(t[i][j], k);
  return out;
}

Christoffel nan_symbols() {
  return {Eigen::Matrix2d::Constant(kNaN), Eigen::Matrix2d::Constant(kNaN)};
}

Christoffel difference(const Christoffel& a, const Christoffel& b) {
  return {a[0] - b[0], a[1] - b[1]};
}

Christoffel raised_covariant(const Tensor2& b_inv, const TensorGradient& cov) {
  Christoffel out;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double sum = 0.0;
        for (int r = 0; r < 2; ++r) sum += b_inv(k, r) * cov[r](i, j);
        out[k](i, j) = -0.5 * sum;
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Form form) noexcept {
  switch (form) {
    case Form::I: return "I";
    case Form::II: return "II";
    case Form::III: return "III";
  }
  return "?";
}

Form parse_form(std::string_view text) {
  if (text == "I" || text == "1") return Form::I;
  if (text == "II" || text == "2") return Form::II;
  if (text == "III" || text == "3") return Form::III;
  fail(ErrorKind::configuration,
       "unknown fundamental form '" + std::string(text) + "' (use I, II, III)");
}

JetVec3 gauss_map(const JetVec3& x_u, const JetVec3& x_v) {
  const JetVec3 normal = cross(x_u, x_v);
  const Jet2 length_sq = dot(normal, normal);
  if (!(length_sq.value() >= kRegularityFloor * kRegularityFloor)) {
    fail(ErrorKind::regularity, "singular point: |x_u x x_v| = " +
                                    std::to_string(std::sqrt(length_sq.value())));
  }
  return recip(sqrt(length_sq)) * normal;
}

SurfaceJets surface_jets(const SurfacePatch& patch, double u, double v,
                         int order) {
  SurfaceJets s;
  s.order = order;
  s.x = patch.evaluate(Jet2::seed(Variable::u, u, order),
                       Jet2::seed(Variable::v, v, order));
  s.dx = {derivative(s.x, Variable::u), derivative(s.x, Variable::v)};
  s.n = gauss_map(s.dx[0], s.dx[1]);

  std::array<JetVec3, 2> dn = {derivative(s.n, Variable::u),
                               derivative(s.n, Variable::v)};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      s.g[i][j] = dot(s.dx[i], s.dx[j]);
      s.b[i][j] = dot(derivative(s.dx[i], axis(j)), s.n);
      s.e[i][j] = dot(dn[i], dn[j]);
    }
  }
  // Symmetry is exact by construction; copy the off-diagonal entry so that
  // rounding in the two dot products cannot break it.
  s.g[1][0] = s.g[0][1];
  s.b[1][0] = s.b[0][1];
  s.e[1][0] = s.e[0][1];

  const Jet2 det_g = s.g[0][0] * s.g[1][1] - s.g[0][1] * s.g[0][1];
  const Jet2 det_b = s.b[0][0] * s.b[1][1] - s.b[0][1] * s.b[0][1];
  s.K = det_b / det_g;
  s.H = 0.5 * (s.b[0][0] * s.g[1][1] - 2.0 * s.b[0][1] * s.g[0][1] +
               s.b[1][1] * s.g[0][0]) /
        det_g;
  return s;
}

const Eigen::Vector3d& FrameData::x_partial(int i, int j) const {
  if (i < 0 || j < 0 || i + j > 3) {
    fail(ErrorKind::out_of_order, "frames carry partials of x through order 3");
  }
  return x_partials[static_cast<std::size_t>(partial_index(i, j))];
}

const Tensor2& FrameData::tensor(Form form) const {
  switch (form) {
    case Form::I: return g;
    case Form::II: return b;
    case Form::III: return e;
  }
  return g;
}

const TensorGradient& FrameData::tensor_gradient(Form form) const {
  switch (form) {
    case Form::I: return dg;
    case Form::II: return db;
    case Form::III: return de;
  }
  return dg;
}

const Tensor2& FrameData::inverse(Form form) const {
  if (form != Form::I && !curved) {
    fail(ErrorKind::singular_form,
         std::string("form ") + std::string(to_string(form)) +
             " is not invertible where K vanishes");
  }
  switch (form) {
    case Form::I: return g_inv;
    case Form::II: return b_inv;
    case Form::III: return e_inv;
  }
  return g_inv;
}

const Christoffel& FrameData::christoffel(Form form) const {
  if (form != Form::I && !curved) {
    fail(ErrorKind::singular_form,
         std::string("Christoffel symbols of form ") +
             std::string(to_string(form)) + " need K != 0");
  }
  switch (form) {
    case Form::I: return Gamma;
    case Form::II: return Pi;
    case Form::III: return LambdaSym;
  }
  return Gamma;
}

Christoffel christoffel(const Tensor2& inverse, const TensorGradient& gradient) {
  Christoffel c;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double sum = 0.0;
        for (int r = 0; r < 2; ++r) {
          sum += inverse(k, r) *
                 (-gradient[r](i, j) + gradient[j](i, r) + gradient[i](j, r));
        }
        c[k](i, j) = 0.5 * sum;
      }
    }
  }
  return c;
}

TensorGradient covariant_derivative(const Tensor2& tensor,
                                    const TensorGradient& gradient,
                                    const Christoffel& connection) {
  TensorGradient out;
  for (int r = 0; r < 2; ++r) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double value = gradient[r](i, j);
        for (int m = 0; m < 2; ++m) {
          value -= connection[m](r, i) * tensor(m, j) +
                   connection[m](r, j) * tensor(i, m);
        }
        out[r](i, j) = value;
      }
    }
  }
  return out;
}

FrameData evaluate_frame(const SurfacePatch& patch, double u, double v,
                         const EngineOptions& options) {
  if (options.jet_order < 3 || options.jet_order > kMaxJetOrder) {
    fail(ErrorKind::configuration,
         "frames need jet order 3 or 4 (third partials of the immersion), got " +
             std::to_string(options.jet_order));
  }
  if (!patch.domain().contains(u, v)) {
    fail(ErrorKind::domain, "(" + std::to_string(u) + ", " +
                                std::to_string(v) + ") is outside the domain of " +
                                patch.name());
  }
  if (const ExclusionZone* zone = patch.excluded_by(u, v)) {
    fail(ErrorKind::domain, "(" + std::to_string(u) + ", " + std::to_string(v) +
                                ") lies in excluded zone: " + zone->reason);
  }

  const SurfaceJets s = surface_jets(patch, u, v, options.jet_order);

  FrameData f;
  f.u = u;
  f.v = v;
  for (int d = 0; d <= 3; ++d) {
    for (int j = 0; j <= d; ++j) {
      f.x_partials[static_cast<std::size_t>(partial_index(d - j, j))] =
          partial(s.x, d - j, j);
    }
  }
  f.x = f.x_partial(0, 0);
  f.x_u = f.x_partial(1, 0);
  f.x_v = f.x_partial(0, 1);

  f.n = value(s.n);
  f.dn = {partial(s.n, 1, 0), partial(s.n, 0, 1)};
  f.ddn[0][0] = partial(s.n, 2, 0);
  f.ddn[0][1] = partial(s.n, 1, 1);
  f.ddn[1][0] = f.ddn[0][1];
  f.ddn[1][1] = partial(s.n, 0, 2);

  f.g = values(s.g);
  f.b = values(s.b);
  f.e = values(s.e);
  f.dg = gradients(s.g);
  f.db = gradients(s.b);
  f.de = gradients(s.e);

  f.K = s.K.value();
  f.H = s.H.value();
  f.dK = {s.K.partial(1, 0), s.K.partial(0, 1)};
  f.dH = {s.H.partial(1, 0), s.H.partial(0, 1)};

  const double det_g = f.g.determinant();
  if (!(det_g > 0.0)) {
    fail(ErrorKind::singular_form, "first fundamental form is degenerate");
  }
  f.g_inv = f.g.inverse();
  f.Gamma = christoffel(f.g_inv, f.dg);

  if (!(std::abs(f.K) >= options.k_min)) {
    if (!options.allow_flat) {
      fail(ErrorKind::flat_point,
           "|K| = " + std::to_string(std::abs(f.K)) + " below k_min = " +
               std::to_string(options.k_min) + " at (" + std::to_string(u) +
               ", " + std::to_string(v) + ")");
    }
    f.curved = false;
    f.b_inv = Tensor2::Constant(kNaN);
    f.e_inv = Tensor2::Constant(kNaN);
    f.Pi = nan_symbols();
    f.LambdaSym = nan_symbols();
    f.T = nan_symbols();
    f.Ttilde = nan_symbols();
    f.det_b_sign = 0.0;
    return f;
  }

  f.det_b_sign = f.b.determinant() > 0.0 ? 1.0 : -1.0;
  f.b_inv = f.b.inverse();
  f.e_inv = f.e.inverse();
  f.Pi = christoffel(f.b_inv, f.db);
  f.LambdaSym = christoffel(f.e_inv, f.de);
  f.T = difference(f.Gamma, f.Pi);
  f.Ttilde = difference(f.LambdaSym, f.Pi);
  return f;
}

Curvatures curvatures(const FrameData& frame) {
  Curvatures c;
  c.K = frame.b.determinant() / frame.g.determinant();
  c.H = 0.5 * (frame.b.cwiseProduct(frame.g_inv)).sum();
  const Tensor2& b_inv = frame.inverse(Form::II);
  c.H_third = 0.5 * (frame.e.cwiseProduct(b_inv)).sum();
  return c;
}

DifferenceTensors difference_tensors(const FrameData& frame) {
  const Tensor2& b_inv = frame.inverse(Form::II);
  DifferenceTensors d;
  d.T = frame.T;
  d.Ttilde = frame.Ttilde;
  d.T_covariant = raised_covariant(
      b_inv, covariant_derivative(frame.b, frame.db, frame.Gamma));
  d.Ttilde_covariant = raised_covariant(
      b_inv, covariant_derivative(frame.b, frame.db, frame.LambdaSym));
  return d;
}

double mainardi_codazzi_residual(const FrameData& frame) {
  const TensorGradient cov =
      covariant_derivative(frame.b, frame.db, frame.Gamma);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        worst = std::max(worst, std::abs(cov[k](i, j) - cov[i](j, k)));
  return worst;
}

double max_abs(const Christoffel& symbols) {
  return std::max(symbols[0].cwiseAbs().maxCoeff(),
                  symbols[1].cwiseAbs().maxCoeff());
}

}  // namespace curvelab
