#pragma once

// Surface catalog and the generic parametric-patch abstraction. Every surface
// is a map (u, v) -> R^3 evaluated on jets, so all geometry downstream gets
// exact partial derivatives of the immersion.

#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "curvelab/jet.hpp"

namespace curvelab {

struct Domain {
  double u_min = 0.0;
  double u_max = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;

  bool contains(double u, double v) const noexcept {
    return u >= u_min && u <= u_max && v >= v_min && v <= v_max;
  }
};

struct ExclusionZone {
  std::string reason;
  std::function<bool(double u, double v)> excludes;
};

using Immersion = std::function<JetVec3(const Jet2& u, const Jet2& v)>;
using CurveMap = std::function<JetVec3(const Jet2& s)>;
using HeightFunction = std::function<Jet2(const Jet2& u, const Jet2& v)>;

/// Directrix sigma and unit ruling direction tau of a ruled surface
/// x(s, t) = sigma(s) + t tau(s), with s the arc length of tau on the unit
/// sphere and sigma' orthogonal to tau.
struct CurvePair {
  std::string name;
  CurveMap sigma;
  CurveMap tau;
  double s_min = 0.0;
  double s_max = 0.0;
};

/// Validates the normalization <tau,tau> = <tau',tau'> = 1, <sigma',tau> = 0
/// on a probe grid of the s interval (tolerance 1e-10).
CurvePair make_curve_pair(std::string name, CurveMap sigma, CurveMap tau,
                          double s_min, double s_max);

/// sigma = (l cos s, l sin s, c s), tau = (cos s, sin s, 0).
CurvePair helicoid_curves(double c, double offset = 0.0,
                          double s_min = -std::numbers::pi,
                          double s_max = std::numbers::pi);

/// Deterministic pseudo-random admissible pair: tau traces a small circle of
/// a randomly rotated sphere, and sigma is assembled from tau, tau' and
/// tau x tau' so that the normalization holds identically.
CurvePair random_curve_pair(std::uint64_t seed);

enum class SurfaceKind {
  sphere,
  helicoid,
  ruled,
  quadric1,
  quadric2,
  cylinder,
  catenoid,
  torus,
  plane,
  monge
};

std::string_view to_string(SurfaceKind kind) noexcept;

class SurfacePatch {
 public:
  SurfacePatch(std::string name, SurfaceKind kind,
               std::map<std::string, double> params, Domain domain,
               Immersion immersion, std::vector<ExclusionZone> zones = {},
               bool flat = false, std::optional<CurvePair> curves = {});

  const std::string& name() const noexcept { return name_; }
  SurfaceKind kind() const noexcept { return kind_; }
  const std::map<std::string, double>& params() const noexcept {
    return params_;
  }
  double param(const std::string& key) const;
  const Domain& domain() const noexcept { return domain_; }
  const std::vector<ExclusionZone>& exclusion_zones() const noexcept {
    return zones_;
  }
  /// Surfaces with K identically zero (plane, cylinder); only form I is
  /// available on them.
  bool flat() const noexcept { return flat_; }
  /// True when a rigid motion or scaling has been applied after construction.
  bool transformed() const noexcept { return transformed_; }
  const std::optional<CurvePair>& curves() const noexcept { return curves_; }

  JetVec3 evaluate(const Jet2& u, const Jet2& v) const {
    return immersion_(u, v);
  }
  Eigen::Vector3d position(double u, double v) const;

  /// Name of the first zone containing (u, v), or nullptr.
  const ExclusionZone* excluded_by(double u, double v) const;
  bool in_domain(double u, double v) const {
    return domain_.contains(u, v) && excluded_by(u, v) == nullptr;
  }

  SurfacePatch with_domain(const Domain& domain) const;

 private:
  friend SurfacePatch transformed(const SurfacePatch&, const Eigen::Matrix3d&,
                                  const Eigen::Vector3d&);

  std::string name_;
  SurfaceKind kind_;
  std::map<std::string, double> params_;
  Domain domain_;
  Immersion immersion_;
  std::vector<ExclusionZone> zones_;
  bool flat_ = false;
  bool transformed_ = false;
  std::optional<CurvePair> curves_;
};

struct ProbeOptions {
  double k_min = 1e-8;
  int grid = 20;
};

/// Checks regularity (and |K| >= k_min on curved surfaces) at the cell
/// centres of a grid x grid lattice over the admissible domain.
void probe_surface(const SurfacePatch& patch, const ProbeOptions& options = {});

SurfacePatch sphere(double r, const ProbeOptions& probe = {});
SurfacePatch helicoid(double c, double offset = 0.0,
                      const ProbeOptions& probe = {});
SurfacePatch ruled(const CurvePair& curves, double t_min = -1.5,
                   double t_max = 1.5, const ProbeOptions& probe = {});
SurfacePatch quadric1(double a, double b, double c,
                      std::optional<Domain> domain = {},
                      const ProbeOptions& probe = {});
SurfacePatch quadric2(double a, double b, std::optional<Domain> domain = {},
                      const ProbeOptions& probe = {});
SurfacePatch cylinder(double r, const ProbeOptions& probe = {});
SurfacePatch catenoid(double c = 1.0, const ProbeOptions& probe = {});
SurfacePatch torus(double R, double r, const ProbeOptions& probe = {});
SurfacePatch plane();
/// Graph z = height(u, v) over the given domain.
SurfacePatch monge(std::string name, HeightFunction height, Domain domain,
                   const ProbeOptions& probe = {});

/// Applies x -> linear * x + offset. Intended for rigid motions and uniform
/// scalings; the orientation convention follows the transformed immersion.
SurfacePatch transformed(const SurfacePatch& patch,
                         const Eigen::Matrix3d& linear,
                         const Eigen::Vector3d& offset = Eigen::Vector3d::Zero());

/// A catalog request as it arrives from configuration.
struct CatalogSpec {
  std::string name;
  std::map<std::string, double> params;
  std::optional<Domain> domain;
};

struct CatalogEntry {
  std::string name;
  std::map<std::string, double> defaults;
  std::string description;
};

const std::vector<CatalogEntry>& catalog();

/// Builds a catalog surface. Missing parameters take the catalog defaults;
/// unknown names or parameters raise configuration errors.
SurfacePatch make_surface(const CatalogSpec& spec,
                          const ProbeOptions& probe = {});

}  // namespace curvelab
