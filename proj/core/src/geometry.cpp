// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nsmc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dimension(const Body& b, const Direction& s) {
  if (s.dimension() != b.dimension()) {
    throw std::domain_error("direction dimension does not match body dimension");
  }
}

std::string format_tag(const char* name, double v) {
  std::ostringstream os;
  os << name << ":" << v;
  return os.str();
}

}  // namespace

void Body::extents(const Direction& s, std::vector<double>& out, RandomStream* rng) const {
  out.clear();
  out.push_back(extent(s, rng));
}

bool Body::contains(const Point&) const {
  throw std::logic_error("body does not support membership queries");
}

std::unique_ptr<Body> Body::with_reference(const Point&) const {
  throw std::logic_error("body does not support re-referencing");
}

ExtentSample extents_multivalued(const Body& body, const Direction& s, RandomStream* rng) {
  ExtentSample sample;
  sample.direction = s;
  body.extents(s, sample.extents, rng);
  for (std::size_t i = 0; i < sample.extents.size(); ++i) {
    const double e = sample.extents[i];
    if (!std::isfinite(e) || e < 0.0) throw std::domain_error("extents must be finite and >= 0");
    if (i > 0 && !(e > sample.extents[i - 1])) {
      throw std::domain_error("extents must be strictly ascending");
    }
  }
  return sample;
}

// --- analytic extent functions ------------------------------------------

double extent_sphere(const Point& center, double radius, const Point& reference,
                     const Direction& s) {
  if (!(radius > 0.0)) throw std::domain_error("extent_sphere: radius must be > 0");
  const int n = reference.dimension();
  double b = 0.0, c = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = reference[i] - center[i];
    b += d * s[i];
    c += d * d;
  }
  c -= radius * radius;
  if (!(c < 0.0)) throw std::domain_error("extent_sphere: reference must be strictly inside");
  // r^2 + 2 b r + c = 0 with c < 0: one positive root.
  return -b + std::sqrt(b * b - c);
}

double extent_cube(const Point& center, double edge, const Point& reference,
                   const Direction& s) {
  if (!(edge > 0.0)) throw std::domain_error("extent_cube: edge must be > 0");
  const double h = 0.5 * edge;
  const int n = reference.dimension();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double d = reference[i] - center[i];
    if (!(std::fabs(d) < h)) {
      throw std::domain_error("extent_cube: reference must be strictly inside");
    }
    if (s[i] > 0.0) {
      best = std::min(best, (h - d) / s[i]);
    } else if (s[i] < 0.0) {
      best = std::min(best, (-h - d) / s[i]);
    }
  }
  return best;
}

double extent_ellipsoid(const std::vector<double>& semi_axes, const Point& reference,
                        const Direction& s) {
  const int n = reference.dimension();
  double qa = 0.0, qb = 0.0, qc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = semi_axes[static_cast<std::size_t>(i)];
    if (!(a > 0.0)) throw std::domain_error("extent_ellipsoid: semi-axes must be > 0");
    const double si = s[i] / a;
    const double pi = reference[i] / a;
    qa += si * si;
    qb += pi * si;
    qc += pi * pi;
  }
  qc -= 1.0;
  if (!(qc < 0.0)) throw std::domain_error("extent_ellipsoid: reference must be strictly inside");
  return (-qb + std::sqrt(qb * qb - qa * qc)) / qa;
}

double extent_from_membership(const MembershipFn& member, const Point& reference,
                              const Direction& s, double tol, double bracket_cap) {
  if (!(tol > 0.0)) throw std::domain_error("extent_from_membership: tol must be > 0");
  if (!(bracket_cap > 0.0)) throw std::domain_error("extent_from_membership: bracket_cap must be > 0");
  if (!member(reference)) {
    throw std::domain_error("extent_from_membership: reference must be inside the body");
  }
  const int n = reference.dimension();
  Point probe = reference;
  auto at = [&](double r) -> const Point& {
    for (int i = 0; i < n; ++i) probe[i] = reference[i] + r * s[i];
    return probe;
  };

  double lo = 0.0;
  double hi = 1.0;
  while (member(at(hi))) {
    lo = hi;
    hi *= 2.0;
    if (hi > bracket_cap) {
      throw std::runtime_error("extent_from_membership: no boundary found within bracket cap");
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (member(at(mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// --- SphereBody -----------------------------------------------------------

SphereBody::SphereBody(int n, double radius, Point center, Point reference)
    : Body(n, std::move(reference)), radius_(radius), center_(std::move(center)) {
  if (n < 1) throw std::domain_error("SphereBody: dimension must be >= 1");
  if (!(radius > 0.0)) throw std::domain_error("SphereBody: radius must be > 0");
  // reuses the root solve's interior check
  double c = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = reference_[i] - center_[i];
    c += d * d;
  }
  if (!(c < radius_ * radius_)) {
    throw std::domain_error("SphereBody: reference must be strictly inside");
  }
}

SphereBody::SphereBody(int n, double radius)
    : SphereBody(n, radius, Point::origin(n), Point::origin(n)) {}

double SphereBody::extent(const Direction& s, RandomStream*) const {
  check_dimension(*this, s);
  return extent_sphere(center_, radius_, reference_, s);
}

bool SphereBody::contains(const Point& p) const {
  double c = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double d = p[i] - center_[i];
    c += d * d;
  }
  return c <= radius_ * radius_;
}

std::unique_ptr<Body> SphereBody::with_reference(const Point& p) const {
  return std::make_unique<SphereBody>(n_, radius_, center_, p);
}

std::string SphereBody::tag() const { return format_tag("sphere", radius_); }

// --- CubeBody ---------------------------------------------------------------

CubeBody::CubeBody(int n, double edge, Point center, Point reference)
    : Body(n, std::move(reference)), edge_(edge), center_(std::move(center)) {
  if (n < 1) throw std::domain_error("CubeBody: dimension must be >= 1");
  if (!(edge > 0.0)) throw std::domain_error("CubeBody: edge must be > 0");
  for (int i = 0; i < n; ++i) {
    if (!(std::fabs(reference_[i] - center_[i]) < 0.5 * edge_)) {
      throw std::domain_error("CubeBody: reference must be strictly inside");
    }
  }
}

CubeBody::CubeBody(int n, double edge)
    : CubeBody(n, edge, Point::origin(n), Point::origin(n)) {}

double CubeBody::extent(const Direction& s, RandomStream*) const {
  check_dimension(*this, s);
  return extent_cube(center_, edge_, reference_, s);
}

bool CubeBody::contains(const Point& p) const {
  for (int i = 0; i < n_; ++i) {
    if (std::fabs(p[i] - center_[i]) > 0.5 * edge_) return false;
  }
  return true;
}

std::unique_ptr<Body> CubeBody::with_reference(const Point& p) const {
  return std::make_unique<CubeBody>(n_, edge_, center_, p);
}

std::string CubeBody::tag() const { return format_tag("cube", edge_); }

// --- EllipsoidBody ---------------------------------------------------------

EllipsoidBody::EllipsoidBody(std::vector<double> semi_axes, Point reference)
    : Body(static_cast<int>(semi_axes.size()), std::move(reference)),
      semi_axes_(std::move(semi_axes)) {
  if (semi_axes_.empty()) throw std::domain_error("EllipsoidBody: dimension must be >= 1");
  double q = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double a = semi_axes_[static_cast<std::size_t>(i)];
    if (!(a > 0.0)) throw std::domain_error("EllipsoidBody: semi-axes must be > 0");
    const double t = reference_[i] / a;
    q += t * t;
  }
  if (!(q < 1.0)) throw std::domain_error("EllipsoidBody: reference must be strictly inside");
}

EllipsoidBody::EllipsoidBody(std::vector<double> semi_axes)
    : EllipsoidBody(std::move(semi_axes), Point::origin(static_cast<int>(semi_axes.size()))) {}

double EllipsoidBody::extent(const Direction& s, RandomStream*) const {
  check_dimension(*this, s);
  return extent_ellipsoid(semi_axes_, reference_, s);
}

bool EllipsoidBody::contains(const Point& p) const {
  double q = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double t = p[i] / semi_axes_[static_cast<std::size_t>(i)];
    q += t * t;
  }
  return q <= 1.0;
}

std::unique_ptr<Body> EllipsoidBody::with_reference(const Point& p) const {
  return std::make_unique<EllipsoidBody>(semi_axes_, p);
}

double EllipsoidBody::characteristic_length() const {
  return *std::max_element(semi_axes_.begin(), semi_axes_.end());
}

std::string EllipsoidBody::tag() const {
  std::ostringstream os;
  os << "ellipsoid:" << semi_axes_.front() << ".." << semi_axes_.back();
  return os.str();
}

// --- DensityBody -------------------------------------------------------------

DensityBody::DensityBody(int n, ExtentDensity density)
    : Body(n, Point::origin(n)), density_(std::move(density)) {
  if (n < 1) throw std::domain_error("DensityBody: dimension must be >= 1");
}

double DensityBody::extent(const Direction& s, RandomStream* rng) const {
  check_dimension(*this, s);
  if (rng == nullptr) {
    throw std::logic_error("DensityBody: extent query requires a random stream");
  }
  return density_.sample(*rng);
}

double DensityBody::characteristic_length() const { return density_.support_hi(); }

std::string DensityBody::tag() const { return density_.tag(); }

// --- MembershipBody -----------------------------------------------------------

MembershipBody::MembershipBody(int n, MembershipFn member, Point reference, double tol,
                               double bracket_cap, double length_scale, std::string label)
    : Body(n, std::move(reference)),
      member_(std::move(member)),
      tol_(tol),
      bracket_cap_(bracket_cap),
      length_scale_(length_scale),
      label_(std::move(label)) {
  if (n < 1) throw std::domain_error("MembershipBody: dimension must be >= 1");
  if (!member_(reference_)) {
    throw std::domain_error("MembershipBody: reference must be inside the body");
  }
}

double MembershipBody::extent(const Direction& s, RandomStream*) const {
  check_dimension(*this, s);
  return extent_from_membership(member_, reference_, s, tol_, bracket_cap_);
}

std::unique_ptr<Body> MembershipBody::with_reference(const Point& p) const {
  return std::make_unique<MembershipBody>(n_, member_, p, tol_, bracket_cap_, length_scale_,
                                          label_);
}

// --- ShellBody -----------------------------------------------------------------

ShellBody::ShellBody(int n, double r_in, double r_out, Point reference)
    : Body(n, std::move(reference)), r_in_(r_in), r_out_(r_out) {
  if (n < 1) throw std::domain_error("ShellBody: dimension must be >= 1");
  if (!(0.0 < r_in && r_in < r_out)) {
    throw std::domain_error("ShellBody: requires 0 < r_in < r_out");
  }
  if (!(reference_.norm() < r_out_)) {
    throw std::domain_error("ShellBody: reference must lie inside the outer sphere");
  }
}

ShellBody::ShellBody(int n, double r_in, double r_out)
    : ShellBody(n, r_in, r_out, Point::origin(n)) {}

double ShellBody::extent(const Direction& s, RandomStream* rng) const {
  std::vector<double> out;
  extents(s, out, rng);
  if (out.size() != 1) {
    throw std::logic_error("ShellBody: extent is multi-valued; use extents()");
  }
  return out.front();
}

void ShellBody::extents(const Direction& s, std::vector<double>& out, RandomStream*) const {
  check_dimension(*this, s);
  out.clear();
  double b = 0.0, p2 = 0.0;
  for (int i = 0; i < n_; ++i) {
    b += reference_[i] * s[i];
    p2 += reference_[i] * reference_[i];
  }
  // positive crossings of |p + r s| = R for both boundary spheres
  for (double radius : {r_in_, r_out_}) {
    const double disc = b * b - (p2 - radius * radius);
    if (disc <= 0.0) continue;  // tangent rays count as no crossing
    const double sq = std::sqrt(disc);
    for (double root : {-b - sq, -b + sq}) {
      if (root > 0.0) out.push_back(root);
    }
  }
  std::sort(out.begin(), out.end());
}

bool ShellBody::contains(const Point& p) const {
  const double r = p.norm();
  return r >= r_in_ && r <= r_out_;
}

std::unique_ptr<Body> ShellBody::with_reference(const Point& p) const {
  return std::make_unique<ShellBody>(n_, r_in_, r_out_, p);
}

std::string ShellBody::tag() const {
  std::ostringstream os;
  os << "shell:" << r_in_ << "," << r_out_;
  return os.str();
}

// --- SectorBody ------------------------------------------------------------------

SectorBody::SectorBody(std::vector<Sector> sectors, std::optional<Notch> notch)
    : Body(2, Point::origin(2)), sectors_(std::move(sectors)), notch_(std::move(notch)) {
  if (sectors_.empty()) throw std::domain_error("SectorBody: needs at least one sector");
  std::sort(sectors_.begin(), sectors_.end(),
            [](const Sector& a, const Sector& b) { return a.theta_lo < b.theta_lo; });
  double expected = 0.0;
  for (const auto& sec : sectors_) {
    if (std::fabs(sec.theta_lo - expected) > 1e-12) {
      throw std::domain_error("SectorBody: sectors must tile [0, 2pi) contiguously");
    }
    if (!(sec.theta_hi > sec.theta_lo)) throw std::domain_error("SectorBody: empty sector");
    if (!(sec.radius > 0.0)) throw std::domain_error("SectorBody: sector radius must be > 0");
    expected = sec.theta_hi;
  }
  if (std::fabs(expected - kTwoPi) > 1e-12) {
    throw std::domain_error("SectorBody: sectors must cover the full circle");
  }
  if (notch_) {
    if (!(0.0 <= notch_->theta_lo && notch_->theta_lo < notch_->theta_hi &&
          notch_->theta_hi <= kTwoPi)) {
      throw std::domain_error("SectorBody: notch angle range invalid");
    }
    if (!(0.0 < notch_->q_inner && notch_->q_inner < notch_->q_outer)) {
      throw std::domain_error("SectorBody: notch radii invalid");
    }
  }
}

SectorBody SectorBody::two_semicircles(double r1, double r2) {
  return SectorBody({{0.0, std::numbers::pi, r1}, {std::numbers::pi, kTwoPi, r2}});
}

double SectorBody::radius_at(double theta) const {
  for (const auto& sec : sectors_) {
    if (theta >= sec.theta_lo && theta < sec.theta_hi) return sec.radius;
  }
  return sectors_.back().radius;  // theta == 2pi wrap
}

double SectorBody::extent(const Direction& s, RandomStream* rng) const {
  std::vector<double> out;
  extents(s, out, rng);
  if (out.size() != 1) {
    throw std::logic_error("SectorBody: extent is multi-valued; use extents()");
  }
  return out.front();
}

void SectorBody::extents(const Direction& s, std::vector<double>& out, RandomStream*) const {
  check_dimension(*this, s);
  out.clear();
  double theta = std::atan2(s[1], s[0]);
  if (theta < 0.0) theta += kTwoPi;
  const double r = radius_at(theta);
  if (notch_ && theta >= notch_->theta_lo && theta < notch_->theta_hi &&
      notch_->q_inner < r) {
    if (notch_->q_outer < r) {
      out.assign({notch_->q_inner, notch_->q_outer, r});
    } else {
      out.assign({notch_->q_inner});
    }
    return;
  }
  out.push_back(r);
}

bool SectorBody::contains(const Point& p) const {
  const double rho = std::hypot(p[0], p[1]);
  double theta = std::atan2(p[1], p[0]);
  if (theta < 0.0) theta += kTwoPi;
  if (rho > radius_at(theta)) return false;
  if (notch_ && theta >= notch_->theta_lo && theta < notch_->theta_hi &&
      rho > notch_->q_inner && rho < notch_->q_outer) {
    return false;
  }
  return true;
}

double SectorBody::characteristic_length() const {
  double m = 0.0;
  for (const auto& sec : sectors_) m = std::max(m, sec.radius);
  return m;
}

double SectorBody::analytic_area() const {
  double area = 0.0;
  for (const auto& sec : sectors_) {
    area += 0.5 * sec.radius * sec.radius * (sec.theta_hi - sec.theta_lo);
  }
  if (notch_) {
    // the notch is only removed where it lies inside the body
    for (const auto& sec : sectors_) {
      const double lo = std::max(sec.theta_lo, notch_->theta_lo);
      const double hi = std::min(sec.theta_hi, notch_->theta_hi);
      if (hi <= lo) continue;
      const double outer = std::min(notch_->q_outer, sec.radius);
      if (outer <= notch_->q_inner) continue;
      area -= 0.5 * (outer * outer - notch_->q_inner * notch_->q_inner) * (hi - lo);
    }
  }
  return area;
}

}  // namespace nsmc
