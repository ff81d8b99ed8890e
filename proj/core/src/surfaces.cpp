#include "curvelab/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "curvelab/forms.hpp"

namespace curvelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCurveTolerance = 1e-10;
constexpr double kQuadricOmegaFloor = 1e-6;
constexpr double kSpherePoleMargin = 0.1;
constexpr double kTorusParabolicMargin = 0.2;

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::construction, message);
}

// Minimum of coefficient * w^2 over w in [lo, hi].
double min_scaled_square(double coefficient, double lo, double hi) {
  const double max_sq = std::max(lo * lo, hi * hi);
  const double min_sq = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(lo * lo, hi * hi);
  return coefficient >= 0.0 ? coefficient * min_sq : coefficient * max_sq;
}

std::uint64_t next_u64(std::mt19937_64& rng) { return rng(); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(next_u64(rng) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

}  // namespace

std::string_view to_string(SurfaceKind kind) noexcept {
  switch (kind) {
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::helicoid: return "helicoid";
    case SurfaceKind::ruled: return "ruled";
    case SurfaceKind::quadric1: return "quadric1";
    case SurfaceKind::quadric2: return "quadric2";
    case SurfaceKind::cylinder: return "cylinder";
    case SurfaceKind::catenoid: return "catenoid";
    case SurfaceKind::torus: return "torus";
    case SurfaceKind::plane: return "plane";
    case SurfaceKind::monge: return "monge";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Curve pairs

CurvePair make_curve_pair(std::string name, CurveMap sigma, CurveMap tau,
                          double s_min, double s_max) {
  require(s_max > s_min, "curve pair needs a nonempty s interval");
  constexpr int kProbes = 21;
  for (int k = 0; k < kProbes; ++k) {
    const double s = s_min + (s_max - s_min) * k / (kProbes - 1);
    const Jet2 js = Jet2::seed(Variable::u, s, kDefaultJetOrder);
    const JetVec3 t = tau(js);
    const JetVec3 dt = derivative(t, Variable::u);
    const JetVec3 ds = derivative(sigma(js), Variable::u);
    const double tt = value(t).squaredNorm();
    const double dtdt = value(dt).squaredNorm();
    const double st = value(ds).dot(value(t));
    if (std::abs(tt - 1.0) > kCurveTolerance ||
        std::abs(dtdt - 1.0) > kCurveTolerance ||
        std::abs(st) > kCurveTolerance) {
      fail(ErrorKind::construction,
           "curve pair '" + name + "' violates <tau,tau>=<tau',tau'>=1, "
           "<sigma',tau>=0 at s=" + format_double(s));
    }
  }
  return CurvePair{std::move(name), std::move(sigma), std::move(tau), s_min,
                   s_max};
}

CurvePair helicoid_curves(double c, double offset, double s_min,
                          double s_max) {
  auto sigma = [c, offset](const Jet2& s) -> JetVec3 {
    return {offset * cos(s), offset * sin(s), c * s};
  };
  auto tau = [](const Jet2& s) -> JetVec3 {
    return {cos(s), sin(s), Jet2::constant(0.0, s.order())};
  };
  return make_curve_pair("helicoid", sigma, tau, s_min, s_max);
}

CurvePair random_curve_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // tau runs along a small circle of opening angle alpha, so m = -cot(alpha)
  // is nonzero; with h' > |g| cot(alpha) the invariant A = h' + g cot(alpha)
  // stays positive on s in [-1, 1].
  const double alpha = uniform(rng, 0.6, 1.2);
  const double h1 = uniform(rng, 1.5, 2.5);
  const double h2 = uniform(rng, -0.2, 0.2);
  const double G0 = uniform(rng, -0.3, 0.3);
  const double G1 = uniform(rng, -0.2, 0.2);
  const double G2 = uniform(rng, -0.2, 0.2);
  Eigen::Quaterniond q(uniform(rng, -1, 1), uniform(rng, -1, 1),
                       uniform(rng, -1, 1), uniform(rng, -1, 1));
  if (q.norm() < 1e-3) q = Eigen::Quaterniond::Identity();
  q.normalize();
  const Eigen::Matrix3d R = q.toRotationMatrix();
  const Eigen::Vector3d origin(uniform(rng, -1, 1), uniform(rng, -1, 1),
                               uniform(rng, -1, 1));

  const double sa = std::sin(alpha);
  const double ca = std::cos(alpha);

  auto rotate = [R](const JetVec3& w) -> JetVec3 {
    JetVec3 out;
    for (int i = 0; i < 3; ++i) {
      out[i] = R(i, 0) * w[0] + R(i, 1) * w[1] + R(i, 2) * w[2];
    }
    return out;
  };
  auto tau = [=](const Jet2& s) -> JetVec3 {
    const Jet2 theta = s / sa;
    return rotate({sa * cos(theta), sa * sin(theta),
                   Jet2::constant(ca, s.order())});
  };
  auto tau_prime = [=](const Jet2& s) -> JetVec3 {
    const Jet2 theta = s / sa;
    return rotate({-sin(theta), cos(theta), Jet2::constant(0.0, s.order())});
  };
  auto sigma = [=](const Jet2& s) -> JetVec3 {
    const Jet2 h = h1 * s + h2 * s * s;
    const Jet2 G = G0 + G1 * s + G2 * s * s;
    const Jet2 dG = G1 + 2.0 * G2 * s;
    const JetVec3 t = tau(s);
    const JetVec3 tp = tau_prime(s);
    return h * cross(t, tp) + dG * tp + G * t +
           constant_vector(origin, s.order());
  };
  return make_curve_pair("random-" + std::to_string(seed), sigma, tau, -1.0,
                         1.0);
}

// ---------------------------------------------------------------------------
// SurfacePatch

SurfacePatch::SurfacePatch(std::string name, SurfaceKind kind,
                           std::map<std::string, double> params, Domain domain,
                           Immersion immersion,
                           std::vector<ExclusionZone> zones, bool flat,
                           std::optional<CurvePair> curves)
    : name_(std::move(name)),
      kind_(kind),
      params_(std::move(params)),
      domain_(domain),
      immersion_(std::move(immersion)),
      zones_(std::move(zones)),
      flat_(flat),
      curves_(std::move(curves)) {
  require(domain_.u_max > domain_.u_min && domain_.v_max > domain_.v_min,
          "surface '" + name_ + "' needs a nonempty parameter rectangle");
}

double SurfacePatch::param(const std::string& key) const {
  const auto it = params_.find(key);
  if (it == params_.end()) {
    fail(ErrorKind::configuration,
         "surface '" + name_ + "' has no parameter '" + key + "'");
  }
  return it->second;
}

Eigen::Vector3d SurfacePatch::position(double u, double v) const {
  return value(evaluate(Jet2::constant(u, 0), Jet2::constant(v, 0)));
}

const ExclusionZone* SurfacePatch::excluded_by(double u, double v) const {
  for (const auto& zone : zones_) {
    if (zone.excludes(u, v)) return &zone;
  }
  return nullptr;
}

SurfacePatch SurfacePatch::with_domain(const Domain& domain) const {
  SurfacePatch copy = *this;
  require(domain.u_max > domain.u_min && domain.v_max > domain.v_min,
          "surface '" + name_ + "' needs a nonempty parameter rectangle");
  copy.domain_ = domain;
  return copy;
}

void probe_surface(const SurfacePatch& patch, const ProbeOptions& options) {
  const Domain& d = patch.domain();
  EngineOptions engine;
  engine.k_min = options.k_min;
  engine.allow_flat = patch.flat();
  int admissible = 0;
  for (int i = 0; i < options.grid; ++i) {
    for (int j = 0; j < options.grid; ++j) {
      const double u = d.u_min + (i + 0.5) * (d.u_max - d.u_min) / options.grid;
      const double v = d.v_min + (j + 0.5) * (d.v_max - d.v_min) / options.grid;
      if (patch.excluded_by(u, v) != nullptr) continue;
      try {
        (void)evaluate_frame(patch, u, v, engine);
      } catch (const Error& e) {
        fail(ErrorKind::construction, "surface '" + patch.name() +
                                          "' fails its construction probe at (" +
                                          format_double(u) + ", " +
                                          format_double(v) + "): " + e.what());
      }
      ++admissible;
    }
  }
  require(admissible > 0,
          "surface '" + patch.name() + "' has no admissible probe points");
}

SurfacePatch sphere(double r, const ProbeOptions& probe) {
  require(r > 0.0, "sphere radius must be positive");
  Immersion x = [r](const Jet2& u, const Jet2& v) -> JetVec3 {
    const Jet2 cv = cos(v);
    return {r * cos(u) * cv, r * sin(u) * cv, r * sin(v)};
  };
  std::vector<ExclusionZone> zones = {
      {"geographic chart pole (|cos v| < " + format_double(kSpherePoleMargin) +
           ")",
       [](double, double v) { return std::abs(std::cos(v)) < kSpherePoleMargin; }}};
  SurfacePatch patch("sphere", SurfaceKind::sphere, {{"r", r}},
                     Domain{-kPi, kPi, -kPi / 2, kPi / 2}, std::move(x),
                     std::move(zones));
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch helicoid(double c, double offset, const ProbeOptions& probe) {
  require(c != 0.0, "helicoid pitch c must be nonzero");
  Immersion x = [c, offset](const Jet2& s, const Jet2& t) -> JetVec3 {
    const Jet2 radius = offset + t;
    return {radius * cos(s), radius * sin(s), c * s};
  };
  SurfacePatch patch("helicoid", SurfaceKind::helicoid,
                     {{"c", c}, {"l", offset}}, Domain{-kPi, kPi, -2.0, 2.0},
                     std::move(x), {}, false,
                     helicoid_curves(c, offset, -kPi, kPi));
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch ruled(const CurvePair& curves, double t_min, double t_max,
                   const ProbeOptions& probe) {
  Immersion x = [sigma = curves.sigma, tau = curves.tau](
                    const Jet2& s, const Jet2& t) -> JetVec3 {
    return sigma(s) + t * tau(s);
  };
  SurfacePatch patch("ruled:" + curves.name, SurfaceKind::ruled, {},
                     Domain{curves.s_min, curves.s_max, t_min, t_max},
                     std::move(x), {}, false, curves);
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch quadric1(double a, double b, double c,
                      std::optional<Domain> domain,
                      const ProbeOptions& probe) {
  require(a * b * c != 0.0, "quadric of the first kind needs abc != 0");
  const Domain d = domain.value_or(Domain{-0.5, 0.5, -0.5, 0.5});
  const double omega_min =
      c + min_scaled_square(a, d.u_min, d.u_max) +
      min_scaled_square(b, d.v_min, d.v_max);
  require(omega_min >= kQuadricOmegaFloor,
          "quadric1 domain reaches omega = c + a u^2 + b v^2 < " +
              format_double(kQuadricOmegaFloor) + " (min " +
              format_double(omega_min) + ")");
  Immersion x = [a, b, c](const Jet2& u, const Jet2& v) -> JetVec3 {
    return {u, v, sqrt(c + a * u * u + b * v * v)};
  };
  SurfacePatch patch("quadric1", SurfaceKind::quadric1,
                     {{"a", a}, {"b", b}, {"c", c}}, d, std::move(x));
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch quadric2(double a, double b, std::optional<Domain> domain,
                      const ProbeOptions& probe) {
  require(a > 0.0 && b > 0.0,
          "quadric of the second kind needs a > 0 and b > 0");
  Immersion x = [a, b](const Jet2& u, const Jet2& v) -> JetVec3 {
    return {u, v, 0.5 * a * u * u + 0.5 * b * v * v};
  };
  SurfacePatch patch("quadric2", SurfaceKind::quadric2, {{"a", a}, {"b", b}},
                     domain.value_or(Domain{-1.0, 1.0, -1.0, 1.0}),
                     std::move(x));
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch cylinder(double r, const ProbeOptions& probe) {
  require(r > 0.0, "cylinder radius must be positive");
  Immersion x = [r](const Jet2& u, const Jet2& v) -> JetVec3 {
    return {r * cos(u), r * sin(u), v};
  };
  SurfacePatch patch("cylinder", SurfaceKind::cylinder, {{"r", r}},
                     Domain{-kPi, kPi, -1.0, 1.0}, std::move(x), {}, true);
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch catenoid(double c, const ProbeOptions& probe) {
  require(c > 0.0, "catenoid neck radius must be positive");
  Immersion x = [c](const Jet2& u, const Jet2& v) -> JetVec3 {
    const Jet2 ch = cosh(v);
    return {c * ch * cos(u), c * ch * sin(u), c * v};
  };
  SurfacePatch patch("catenoid", SurfaceKind::catenoid, {{"c", c}},
                     Domain{-kPi, kPi, -1.5, 1.5}, std::move(x));
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch torus(double R, double r, const ProbeOptions& probe) {
  require(r > 0.0 && R > r, "torus needs R > r > 0");
  Immersion x = [R, r](const Jet2& u, const Jet2& v) -> JetVec3 {
    const Jet2 w = R + r * cos(v);
    return {w * cos(u), w * sin(u), r * sin(v)};
  };
  std::vector<ExclusionZone> zones = {
      {"parabolic circles (|cos v| < " + format_double(kTorusParabolicMargin) +
           ")",
       [](double, double v) {
         return std::abs(std::cos(v)) < kTorusParabolicMargin;
       }}};
  SurfacePatch patch("torus", SurfaceKind::torus, {{"R", R}, {"r", r}},
                     Domain{-kPi, kPi, -kPi, kPi}, std::move(x),
                     std::move(zones));
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch plane() {
  Immersion x = [](const Jet2& u, const Jet2& v) -> JetVec3 {
    return {u, v, Jet2::constant(0.0, u.order())};
  };
  return SurfacePatch("plane", SurfaceKind::plane, {},
                      Domain{-1.0, 1.0, -1.0, 1.0}, std::move(x), {}, true);
}

SurfacePatch monge(std::string name, HeightFunction height, Domain domain,
                   const ProbeOptions& probe) {
  Immersion x = [h = std::move(height)](const Jet2& u,
                                        const Jet2& v) -> JetVec3 {
    return {u, v, h(u, v)};
  };
  SurfacePatch patch(std::move(name), SurfaceKind::monge, {}, domain,
                     std::move(x));
  probe_surface(patch, probe);
  return patch;
}

SurfacePatch transformed(const SurfacePatch& patch,
                         const Eigen::Matrix3d& linear,
                         const Eigen::Vector3d& offset) {
  require(std::abs(linear.determinant()) > 1e-12,
          "surface transform must be invertible");
  SurfacePatch copy = patch;
  copy.immersion_ = [base = patch.immersion_, linear, offset](
                        const Jet2& u, const Jet2& v) -> JetVec3 {
    const JetVec3 x = base(u, v);
    JetVec3 out;
    for (int i = 0; i < 3; ++i) {
      out[i] = linear(i, 0) * x[0] + linear(i, 1) * x[1] +
               linear(i, 2) * x[2] + offset(i);
    }
    return out;
  };
  copy.transformed_ = true;
  return copy;
}

// ---------------------------------------------------------------------------
// Catalog

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"sphere", {{"r", 1.0}},
       "(cos u cos v, sin u cos v, sin v) r, geographic chart, poles excluded"},
      {"helicoid", {{"c", 1.0}, {"l", 0.0}},
       "((l+t) cos s, (l+t) sin s, c s)"},
      {"ruled", {{"seed", 0.0}},
       "sigma(s) + t tau(s) for a pseudo-random admissible curve pair"},
      {"quadric1", {{"a", -1.0}, {"b", -1.0}, {"c", 1.0}},
       "(u, v, sqrt(c + a u^2 + b v^2)), abc != 0"},
      {"quadric2", {{"a", 1.0}, {"b", 1.0}},
       "(u, v, a u^2/2 + b v^2/2), a, b > 0"},
      {"cylinder", {{"r", 1.0}}, "(r cos u, r sin u, v), flat"},
      {"catenoid", {{"c", 1.0}}, "(c cosh v cos u, c cosh v sin u, c v)"},
      {"torus", {{"R", 2.0}, {"r", 0.5}},
       "((R + r cos v) cos u, (R + r cos v) sin u, r sin v)"},
      {"plane", {}, "(u, v, 0), flat"},
      {"monge", {{"a", 1.0}, {"b", 1.0}},
       "(u, v, a cosh u + b cosh v)"},
  };
  return entries;
}

SurfacePatch make_surface(const CatalogSpec& spec, const ProbeOptions& probe) {
  const auto& entries = catalog();
  const auto entry = std::find_if(
      entries.begin(), entries.end(),
      [&](const CatalogEntry& e) { return e.name == spec.name; });
  if (entry == entries.end()) {
    fail(ErrorKind::configuration, "unknown surface '" + spec.name + "'");
  }
  std::map<std::string, double> p = entry->defaults;
  for (const auto& [key, value] : spec.params) {
    if (!p.contains(key)) {
      fail(ErrorKind::configuration, "surface '" + spec.name +
                                         "' has no parameter '" + key + "'");
    }
    p[key] = value;
  }

  auto finish = [&](SurfacePatch patch) {
    if (spec.domain) {
      patch = patch.with_domain(*spec.domain);
      probe_surface(patch, probe);
    }
    return patch;
  };

  const std::string& name = spec.name;
  if (name == "sphere") return finish(sphere(p["r"], probe));
  if (name == "helicoid") return finish(helicoid(p["c"], p["l"], probe));
  if (name == "ruled") {
    const double seed = p["seed"];
    if (seed < 0 || seed != std::floor(seed)) {
      fail(ErrorKind::configuration, "ruled seed must be a nonnegative integer");
    }
    SurfacePatch patch =
        ruled(random_curve_pair(static_cast<std::uint64_t>(seed)), -1.5, 1.5,
              probe);
    return finish(std::move(patch));
  }
  if (name == "quadric1") {
    return quadric1(p["a"], p["b"], p["c"], spec.domain, probe);
  }
  if (name == "quadric2") return quadric2(p["a"], p["b"], spec.domain, probe);
  if (name == "cylinder") return finish(cylinder(p["r"], probe));
  if (name == "catenoid") return finish(catenoid(p["c"], probe));
  if (name == "torus") return finish(torus(p["R"], p["r"], probe));
  if (name == "plane") return finish(plane());
  if (name == "monge") {
    const double a = p["a"];
    const double b = p["b"];
    require(a * b != 0.0, "monge surface needs a b != 0");
    SurfacePatch patch = monge(
        "monge",
        [a, b](const Jet2& u, const Jet2& v) { return a * cosh(u) + b * cosh(v); },
        spec.domain.value_or(Domain{-1.0, 1.0, -1.0, 1.0}), probe);
    return patch;
  }
  fail(ErrorKind::configuration, "unknown surface '" + name + "'");
}

}  // namespace curvelab
