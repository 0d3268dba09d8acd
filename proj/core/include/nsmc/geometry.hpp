// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nsmc/density.hpp"
#include "nsmc/random.hpp"
#include "nsmc/types.hpp"

namespace nsmc {

enum class BodyKind {
  sphere,
  cube,
  ellipsoid,
  density_synthetic,
  membership_backed,
  shell,
  composite_sector,
};

/// Queryable geometric domain: maps directions to extents measured from a
/// reference point. Immutable after construction and safe to share across
/// workers; density-synthetic bodies take the caller's random stream, so
/// they hold no mutable state.
///
/// Extent counts follow the crossing-parity convention: odd when the
/// reference point is inside the body, even when outside.
class Body {
 public:
  virtual ~Body() = default;

  int dimension() const { return n_; }
  const Point& reference() const { return reference_; }
  virtual BodyKind kind() const = 0;

  /// Single-valued extent. Throws std::logic_error if the body is
  /// multi-valued along s, or if a density-synthetic body is queried
  /// without a random stream.
  virtual double extent(const Direction& s, RandomStream* rng = nullptr) const = 0;

  /// All boundary crossings along s, strictly ascending (appended to out,
  /// which is cleared first). Defaults to the single-valued extent.
  virtual void extents(const Direction& s, std::vector<double>& out,
                       RandomStream* rng = nullptr) const;

  virtual bool has_membership() const { return false; }
  virtual bool contains(const Point&) const;

  /// Same body with a different reference point (throws std::domain_error
  /// if the point is not inside, std::logic_error if unsupported).
  virtual std::unique_ptr<Body> with_reference(const Point&) const;

  /// Length scale used for jittered-reference experiments (edge, radius,
  /// longest axis, ...).
  virtual double characteristic_length() const = 0;

  virtual std::string tag() const = 0;

 protected:
  Body(int n, Point reference) : n_(n), reference_(std::move(reference)) {}

  int n_;
  Point reference_;
};

/// Multi-valued extent query as a checked value type.
ExtentSample extents_multivalued(const Body& body, const Direction& s,
                                 RandomStream* rng = nullptr);

// --- analytic extent functions ------------------------------------------

/// Unique positive root r of |reference + r s - center| = radius.
/// The reference must be strictly inside.
double extent_sphere(const Point& center, double radius, const Point& reference,
                     const Direction& s);

/// Distance from an interior reference to the boundary of the axis-aligned
/// cube along s (components with s_i = 0 run parallel to those faces and
/// are skipped).
double extent_cube(const Point& center, double edge, const Point& reference,
                   const Direction& s);

/// Positive root of sum_i ((p_i + r s_i)/a_i)^2 = 1 for an origin-centered
/// ellipsoid with semi-axes a.
double extent_ellipsoid(const std::vector<double>& semi_axes, const Point& reference,
                        const Direction& s);

using MembershipFn = std::function<bool(const Point&)>;

/// Extent from a membership predicate alone: double an initial unit step
/// until the ray leaves the body, then bisect to tol. Throws
/// std::domain_error if the reference is outside, std::runtime_error if no
/// outside point is found within bracket_cap.
double extent_from_membership(const MembershipFn& member, const Point& reference,
                              const Direction& s, double tol,
                              double bracket_cap = 1099511627776.0 /* 2^40 */);

// --- concrete bodies ------------------------------------------------------

class SphereBody final : public Body {
 public:
  SphereBody(int n, double radius, Point center, Point reference);
  SphereBody(int n, double radius);  // centered at the origin

  BodyKind kind() const override { return BodyKind::sphere; }
  double extent(const Direction& s, RandomStream* rng = nullptr) const override;
  bool has_membership() const override { return true; }
  bool contains(const Point& p) const override;
  std::unique_ptr<Body> with_reference(const Point& p) const override;
  double characteristic_length() const override { return radius_; }
  std::string tag() const override;

  double radius() const { return radius_; }
  const Point& center() const { return center_; }

 private:
  double radius_;
  Point center_;
};

class CubeBody final : public Body {
 public:
  CubeBody(int n, double edge, Point center, Point reference);
  CubeBody(int n, double edge);

  BodyKind kind() const override { return BodyKind::cube; }
  double extent(const Direction& s, RandomStream* rng = nullptr) const override;
  bool has_membership() const override { return true; }
  bool contains(const Point& p) const override;
  std::unique_ptr<Body> with_reference(const Point& p) const override;
  double characteristic_length() const override { return edge_; }
  std::string tag() const override;

  double edge() const { return edge_; }
  const Point& center() const { return center_; }

 private:
  double edge_;
  Point center_;
};

class EllipsoidBody final : public Body {
 public:
  EllipsoidBody(std::vector<double> semi_axes, Point reference);
  explicit EllipsoidBody(std::vector<double> semi_axes);

  BodyKind kind() const override { return BodyKind::ellipsoid; }
  double extent(const Direction& s, RandomStream* rng = nullptr) const override;
  bool has_membership() const override { return true; }
  bool contains(const Point& p) const override;
  std::unique_ptr<Body> with_reference(const Point& p) const override;
  double characteristic_length() const override;
  std::string tag() const override;

  const std::vector<double>& semi_axes() const { return semi_axes_; }

 private:
  std::vector<double> semi_axes_;
};

/// Body represented only by its extent density: each extent query draws a
/// fresh iid extent from f_R (directions are almost surely never repeated,
/// so the joint law of (direction, extent) matches the target density).
class DensityBody final : public Body {
 public:
  DensityBody(int n, ExtentDensity density);

  BodyKind kind() const override { return BodyKind::density_synthetic; }
  double extent(const Direction& s, RandomStream* rng = nullptr) const override;
  double characteristic_length() const override;
  std::string tag() const override;

  const ExtentDensity& density() const { return density_; }

 private:
  ExtentDensity density_;
};

/// Body defined by a membership predicate; extents via bisection.
class MembershipBody final : public Body {
 public:
  MembershipBody(int n, MembershipFn member, Point reference, double tol = 1e-9,
                 double bracket_cap = 1099511627776.0, double length_scale = 1.0,
                 std::string label = "membership");

  BodyKind kind() const override { return BodyKind::membership_backed; }
  double extent(const Direction& s, RandomStream* rng = nullptr) const override;
  bool has_membership() const override { return true; }
  bool contains(const Point& p) const override { return member_(p); }
  std::unique_ptr<Body> with_reference(const Point& p) const override;
  double characteristic_length() const override { return length_scale_; }
  std::string tag() const override { return label_; }

 private:
  MembershipFn member_;
  double tol_;
  double bracket_cap_;
  double length_scale_;
  std::string label_;
};

/// Spherical shell r_in <= |x| <= r_out centered at the origin; the
/// canonical multi-valued body. References inside the hole see two
/// crossings per direction, references inside the material one or three.
class ShellBody final : public Body {
 public:
  ShellBody(int n, double r_in, double r_out, Point reference);
  ShellBody(int n, double r_in, double r_out);

  BodyKind kind() const override { return BodyKind::shell; }
  double extent(const Direction& s, RandomStream* rng = nullptr) const override;
  void extents(const Direction& s, std::vector<double>& out,
               RandomStream* rng = nullptr) const override;
  bool has_membership() const override { return true; }
  bool contains(const Point& p) const override;
  std::unique_ptr<Body> with_reference(const Point& p) const override;
  double characteristic_length() const override { return r_out_; }
  std::string tag() const override;

 private:
  double r_in_;
  double r_out_;
};

/// 2D body assembled from angular sectors of piecewise-constant radius,
/// optionally with an annular notch cut out of a range of angles. Extents
/// are measured from the origin, which must lie inside. Covers both the
/// two-semicircle composite and star-shaped test bodies with multi-valued
/// directions.
class SectorBody final : public Body {
 public:
  struct Sector {
    double theta_lo;  // [0, 2pi)
    double theta_hi;
    double radius;
  };
  struct Notch {
    double theta_lo;
    double theta_hi;
    double q_inner;
    double q_outer;
  };

  SectorBody(std::vector<Sector> sectors, std::optional<Notch> notch = std::nullopt);

  BodyKind kind() const override { return BodyKind::composite_sector; }
  double extent(const Direction& s, RandomStream* rng = nullptr) const override;
  void extents(const Direction& s, std::vector<double>& out,
               RandomStream* rng = nullptr) const override;
  bool has_membership() const override { return true; }
  bool contains(const Point& p) const override;
  double characteristic_length() const override;
  std::string tag() const override { return "sector2d"; }

  /// Exact area (sector sum minus the notch).
  double analytic_area() const;

  /// Two half-disks of radius r1 and r2 joined along a diameter.
  static SectorBody two_semicircles(double r1, double r2);

 private:
  double radius_at(double theta) const;

  std::vector<Sector> sectors_;
  std::optional<Notch> notch_;
};

}  // namespace nsmc
