/*
 * Copyright (c) 2026 The toponogov Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file spaces.hpp
 * @brief Geodesic metric spaces with explicit unit-speed segments.
 *
 * A space type provides a Point type, a metric, and for any two points a
 * Segment, i.e. an isometric embedding of [0, |pq|]. Four concrete spaces
 * are provided: the Euclidean plane, the round sphere of radius r, the
 * hyperbolic plane (hyperboloid model, curvature -1) and the Euclidean cone
 * of total angle theta.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "toponogov/errors.hpp"
#include "toponogov/random.hpp"

namespace toponogov {

template <class S>
class Segment;

template <class S>
concept GeodesicSpace = requires(const S& s, const typename S::Point& p, Rng& rng, double t) {
  typename S::Point;
  typename S::Geodesic;
  { s.distance(p, p) } -> std::convertible_to<double>;
  { s.segment(p, p) } -> std::same_as<Segment<S>>;
  { s.validate(p) };
  { s.curvature_floor() } -> std::same_as<std::optional<double>>;
  { s.sample_near(p, t, rng) } -> std::same_as<typename S::Point>;
};

/// A unit-speed segment, possibly a reversed sub-interval of a carrier
/// geodesic. point_at(0) and point_at(length()) return the stored endpoints
/// exactly.
template <class S>
class Segment {
 public:
  using Point = typename S::Point;
  using Geodesic = typename S::Geodesic;

  Segment(const S& space, Geodesic carrier, double length, Point start, Point end)
      : space_(space), carrier_(std::move(carrier)), length_(length), start_(std::move(start)), end_(std::move(end)) {}

  const S& space() const { return space_; }
  double length() const { return length_; }
  const Point& start() const { return start_; }
  const Point& end() const { return end_; }

  Point point_at(double s) const {
    const double slack = 1e-12 * std::max(1.0, length_);
    if (!(s >= -slack && s <= length_ + slack)) throw DomainError("segment: arclength out of range");
    if (s <= 0.0) return start_;
    if (s >= length_) return end_;
    return carrier_.eval(reversed_ ? offset_ - s : offset_ + s);
  }

  /// The piece between arclengths s0 and s1, oriented from s0 to s1.
  Segment sub(double s0, double s1) const {
    Segment out = *this;
    out.start_ = point_at(s0);
    out.end_ = point_at(s1);
    s0 = std::clamp(s0, 0.0, length_);
    s1 = std::clamp(s1, 0.0, length_);
    out.offset_ = reversed_ ? offset_ - s0 : offset_ + s0;
    out.reversed_ = reversed_ != (s1 < s0);
    out.length_ = std::abs(s1 - s0);
    return out;
  }

  Segment reversed() const { return sub(length_, 0.0); }

 private:
  S space_;
  Geodesic carrier_;
  double offset_ = 0.0;
  double length_ = 0.0;
  bool reversed_ = false;
  Point start_;
  Point end_;
};

template <class S>
typename S::Point interpolate(const Segment<S>& seg, double s) {
  return seg.point_at(s);
}

// ---------------------------------------------------------------------------

class Plane {
 public:
  using Point = Eigen::Vector2d;

  struct Geodesic {
    Point origin = Point::Zero();
    Point direction = Point::Zero();
    Point eval(double t) const { return origin + t * direction; }
  };

  static constexpr const char* kName = "plane";

  void validate(const Point& p) const {
    if (!p.allFinite()) throw DomainError("plane: non-finite coordinates");
  }

  double distance(const Point& p, const Point& q) const {
    validate(p);
    validate(q);
    return (p - q).norm();
  }

  Segment<Plane> segment(const Point& p, const Point& q) const {
    const double d = distance(p, q);
    Geodesic g{p, d > 0.0 ? Point((q - p) / d) : Point::Zero()};
    return {*this, g, d, p, q};
  }

  std::optional<double> curvature_floor() const { return 0.0; }

  Point base_point() const { return Point::Zero(); }

  /// Point at distance `dist` from `base` in direction `heading` (radians
  /// from the first axis).
  Point exp(const Point& base, double heading, double dist) const {
    return base + dist * Point(std::cos(heading), std::sin(heading));
  }

  Point sample_near(const Point& center, double radius, Rng& rng) const {
    const double rho = radius * std::sqrt(rng.uniform());
    return exp(center, rng.uniform(0.0, 2.0 * std::numbers::pi), rho);
  }
};

// ---------------------------------------------------------------------------

class Sphere {
 public:
  using Point = Eigen::Vector3d;

  struct Geodesic {
    Eigen::Vector3d u = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d w = Eigen::Vector3d::UnitX();
    double radius = 1.0;
    Point eval(double t) const {
      const Eigen::Vector3d v = std::cos(t / radius) * u + std::sin(t / radius) * w;
      return radius * v.normalized();
    }
  };

  static constexpr const char* kName = "sphere";

  explicit Sphere(double radius = 1.0) : radius_(radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("sphere: radius must be positive and finite");
  }

  double radius() const { return radius_; }

  void validate(const Point& p) const {
    if (!p.allFinite() || std::abs(p.norm() - radius_) > 1e-12 * radius_) {
      throw DomainError("sphere: point is not on the sphere");
    }
  }

  double distance(const Point& p, const Point& q) const {
    validate(p);
    validate(q);
    return radius_ * std::atan2(p.cross(q).norm(), p.dot(q));
  }

  Segment<Sphere> segment(const Point& p, const Point& q) const {
    const double d = distance(p, q);
    if (d >= std::numbers::pi * radius_ * (1.0 - 1e-12)) {
      throw AmbiguityError("sphere: antipodal points have no canonical segment");
    }
    const Eigen::Vector3d u = p.normalized();
    Eigen::Vector3d w = q.normalized() - u.dot(q.normalized()) * u;
    w -= u.dot(w) * u;
    w = w.norm() > 0.0 ? Eigen::Vector3d(w.normalized()) : tangent_frame(p).first;
    return {*this, Geodesic{u, w, radius_}, d, p, q};
  }

  std::optional<double> curvature_floor() const { return 1.0 / (radius_ * radius_); }

  Point base_point() const { return north_pole(); }
  Point north_pole() const { return {0.0, 0.0, radius_}; }

  /// Point with the given colatitude and longitude (radians).
  Point from_angles(double colatitude, double longitude) const {
    return radius_ * Eigen::Vector3d(std::sin(colatitude) * std::cos(longitude),
                                     std::sin(colatitude) * std::sin(longitude), std::cos(colatitude));
  }

  /// Orthonormal tangent frame at p; at the north pole it is (e_x, e_y).
  std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_frame(const Point& p) const {
    const Eigen::Vector3d n = p.normalized();
    Eigen::Vector3d helper = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    Eigen::Vector3d e1 = (helper - helper.dot(n) * n).normalized();
    return {e1, n.cross(e1)};
  }

  Point exp(const Point& base, double heading, double dist) const {
    const auto [e1, e2] = tangent_frame(base);
    const Eigen::Vector3d dir = std::cos(heading) * e1 + std::sin(heading) * e2;
    return Geodesic{base.normalized(), dir, radius_}.eval(dist);
  }

  Point sample_near(const Point& center, double radius, Rng& rng) const {
    const double rho = radius * std::sqrt(rng.uniform());
    return exp(center, rng.uniform(0.0, 2.0 * std::numbers::pi), rho);
  }

 private:
  double radius_;
};

// ---------------------------------------------------------------------------

/// Hyperbolic plane of curvature -1 as the upper sheet of the hyperboloid
/// -t^2 + x^2 + y^2 = -1, coordinates (t, x, y).
class Hyperbolic {
 public:
  using Point = Eigen::Vector3d;

  static double minkowski(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  }

  // Lift the spatial part of a near-sheet vector onto the sheet. Rescaling
  // by the Minkowski norm would cancel badly far from the origin.
  static Point project(const Eigen::Vector3d& v) { return {std::hypot(1.0, v[1], v[2]), v[1], v[2]}; }

  struct Geodesic {
    Eigen::Vector3d u = Eigen::Vector3d::UnitX();
    Eigen::Vector3d w = Eigen::Vector3d::UnitY();
    Point eval(double t) const { return project(std::cosh(t) * u + std::sinh(t) * w); }
  };

  static constexpr const char* kName = "hyperbolic";

  void validate(const Point& p) const {
    if (!p.allFinite() || !(p[0] > 0.0) || std::abs(minkowski(p, p) + 1.0) > 1e-12 * p.squaredNorm()) {
      throw DomainError("hyperbolic: point is not on the hyperboloid sheet");
    }
  }

  double distance(const Point& p, const Point& q) const {
    validate(p);
    validate(q);
    // |p - q|_M = 2 sinh(d/2); avoids the cancellation of acosh near 1.
    return 2.0 * std::asinh(0.5 * std::sqrt(chord_squared(p, q)));
  }

  // Minkowski square of p - q. With dx = x_p - x_q, s = x_p + x_q and
  // T = t_p + t_q the time difference is dt = (dx.s)/T, and
  //   |dx|^2 - dt^2 = (|dx x s|^2 + (dx.s)^2 (2 + 2C) / T^2) / |s|^2,
  // C = -<p,q>, which has no cancellation far from the origin.
  static double chord_squared(const Point& p, const Point& q) {
    const Eigen::Vector2d dx(p[1] - q[1], p[2] - q[2]);
    const Eigen::Vector2d s(p[1] + q[1], p[2] + q[2]);
    const double t = p[0] + q[0];
    const double s2 = s.squaredNorm();
    if (s2 <= 0.25 * t * t) {
      const double dt = dx.dot(s) / t;
      return std::max(dx.squaredNorm() - dt * dt, 0.0);
    }
    const double cross = dx.x() * s.y() - dx.y() * s.x();
    const double dot = dx.dot(s);
    const double c = std::max(-minkowski(p, q), 1.0);
    return (cross * cross + dot * dot * (2.0 + 2.0 * c) / (t * t)) / s2;
  }

  Segment<Hyperbolic> segment(const Point& p, const Point& q) const {
    const double d = distance(p, q);
    Eigen::Vector3d w = tangent_unit(p, q + minkowski(p, q) * p);
    if (w.isZero()) w = tangent_frame(p).first;
    return {*this, Geodesic{p, w}, d, p, q};
  }

  std::optional<double> curvature_floor() const { return -1.0; }

  Point base_point() const { return origin(); }
  Point origin() const { return Eigen::Vector3d::UnitX(); }

  /// Point at distance rho from the origin in direction phi.
  Point from_polar(double rho, double phi) const {
    return {std::cosh(rho), std::sinh(rho) * std::cos(phi), std::sinh(rho) * std::sin(phi)};
  }

  /// Minkowski-orthonormal tangent frame at p; at the origin it is (e_x, e_y).
  std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_frame(const Point& p) const {
    const Eigen::Vector3d e1 = tangent_unit(p, Eigen::Vector3d::UnitY() + minkowski(p, Eigen::Vector3d::UnitY()) * p);
    Eigen::Vector3d e2 = Eigen::Vector3d::UnitZ() + minkowski(p, Eigen::Vector3d::UnitZ()) * p;
    e2 -= minkowski(e2, e1) * e1;
    return {e1, tangent_unit(p, e2)};
  }

  /// Unit tangent vector at p along the spatial part of v. With the time
  /// part fixed by tangency, <v,v> = (|v_x|^2 + (x_p x v_x)^2) / t_p^2.
  /// Returns zero when v has no spatial part.
  static Eigen::Vector3d tangent_unit(const Point& p, const Eigen::Vector3d& v) {
    const double cross = p[1] * v[2] - p[2] * v[1];
    const double n2 = (v[1] * v[1] + v[2] * v[2] + cross * cross) / (p[0] * p[0]);
    if (!(n2 > 0.0)) return Eigen::Vector3d::Zero();
    const double n = std::sqrt(n2);
    return Eigen::Vector3d((p[1] * v[1] + p[2] * v[2]) / p[0], v[1], v[2]) / n;
  }

  Point exp(const Point& base, double heading, double dist) const {
    const auto [e1, e2] = tangent_frame(base);
    return Geodesic{base, std::cos(heading) * e1 + std::sin(heading) * e2}.eval(dist);
  }

  Point sample_near(const Point& center, double radius, Rng& rng) const {
    const double rho = radius * std::sqrt(rng.uniform());
    return exp(center, rng.uniform(0.0, 2.0 * std::numbers::pi), rho);
  }
};

// ---------------------------------------------------------------------------

struct ConePoint {
  double r = 0.0;    // distance to the apex
  double phi = 0.0;  // angular coordinate in [0, theta)
};

/// Euclidean cone over a circle of length theta. Flat away from the apex;
/// curvature >= 0 in the sense of Alexandrov iff theta <= 2 pi.
class Cone {
 public:
  using Point = ConePoint;

  struct Geodesic {
    enum class Kind { kUnrolled, kThroughApex };
    Kind kind = Kind::kUnrolled;
    double theta = 2.0 * std::numbers::pi;
    double length = 0.0;
    // kUnrolled: start at (r1, 0) in the development, end at q_dev.
    double r1 = 0.0;
    double phi1 = 0.0;
    double sigma = 1.0;
    Eigen::Vector2d q_dev = Eigen::Vector2d::Zero();
    // kThroughApex: radial in along phi1, then out along phi2.
    double phi2 = 0.0;

    Point eval(double t) const {
      if (kind == Kind::kThroughApex) {
        if (t <= r1) return normalized(r1 - t, phi1, theta);
        return normalized(t - r1, phi2, theta);
      }
      const Eigen::Vector2d p_dev(r1, 0.0);
      const Eigen::Vector2d x = length > 0.0 ? Eigen::Vector2d(p_dev + (t / length) * (q_dev - p_dev)) : p_dev;
      const double rho = x.norm();
      if (rho == 0.0) return {0.0, 0.0};
      return normalized(rho, phi1 + sigma * std::atan2(x.y(), x.x()), theta);
    }
  };

  static constexpr const char* kName = "cone";

  explicit Cone(double total_angle) : theta_(total_angle) {
    if (!(total_angle > 0.0) || !std::isfinite(total_angle)) {
      throw DomainError("cone: total angle must be positive and finite");
    }
  }

  double total_angle() const { return theta_; }

  static Point normalized(double r, double phi, double theta) {
    if (r == 0.0) return {0.0, 0.0};
    phi = std::fmod(phi, theta);
    if (phi < 0.0) phi += theta;
    if (phi >= theta) phi = 0.0;
    return {r, phi};
  }

  /// Point with distance r to the apex and angular coordinate phi (any real,
  /// reduced modulo theta).
  Point point(double r, double phi) const {
    if (!(r >= 0.0) || !std::isfinite(r) || !std::isfinite(phi)) throw DomainError("cone: invalid coordinates");
    return normalized(r, phi, theta_);
  }

  Point apex() const { return {0.0, 0.0}; }
  Point base_point() const { return apex(); }

  void validate(const Point& p) const {
    if (!std::isfinite(p.r) || !std::isfinite(p.phi) || p.r < 0.0 || p.phi < 0.0 || p.phi >= theta_) {
      throw DomainError("cone: point outside the coordinate domain");
    }
  }

  /// Shorter angular gap between two angular coordinates.
  double gap(double phi1, double phi2) const {
    const double d = std::abs(phi1 - phi2);
    return std::min(d, theta_ - d);
  }

  double distance(const Point& p, const Point& q) const {
    validate(p);
    validate(q);
    const double delta = gap(p.phi, q.phi);
    if (delta >= std::numbers::pi) return p.r + q.r;
    const double s = std::sin(0.5 * delta);
    const double dr = p.r - q.r;
    return std::sqrt(dr * dr + 4.0 * p.r * q.r * s * s);
  }

  Segment<Cone> segment(const Point& p, const Point& q) const {
    const double d = distance(p, q);
    Geodesic g;
    g.theta = theta_;
    g.length = d;
    g.r1 = p.r;
    g.phi1 = p.phi;
    // Direction of the shorter angular gap; ties go in increasing phi.
    double forward = std::fmod(q.phi - p.phi, theta_);
    if (forward < 0.0) forward += theta_;
    double delta = forward;
    g.sigma = 1.0;
    if (forward > 0.5 * theta_) {
      delta = theta_ - forward;
      g.sigma = -1.0;
    }
    if (p.r == 0.0 || q.r == 0.0) delta = 0.0;  // radial segment
    if (delta >= std::numbers::pi) {
      g.kind = Geodesic::Kind::kThroughApex;
      g.phi2 = q.phi;
    } else {
      g.kind = Geodesic::Kind::kUnrolled;
      if (p.r == 0.0) {
        // From the apex: straight out along q's ray.
        g.phi1 = q.phi;
        g.sigma = 1.0;
      }
      g.q_dev = q.r * Eigen::Vector2d(std::cos(delta), std::sin(delta));
    }
    return {*this, g, d, p, q};
  }

  std::optional<double> curvature_floor() const {
    if (theta_ <= 2.0 * std::numbers::pi) return 0.0;
    return std::nullopt;
  }

  /// Straight line in the development from a regular point; heading is
  /// measured from the outward radial direction. Valid while dist < base.r.
  Point exp(const Point& base, double heading, double dist) const {
    if (base.r == 0.0) return normalized(dist, heading * theta_ / (2.0 * std::numbers::pi), theta_);
    const Eigen::Vector2d x(base.r + dist * std::cos(heading), dist * std::sin(heading));
    return normalized(x.norm(), base.phi + std::atan2(x.y(), x.x()), theta_);
  }

  Point sample_near(const Point& center, double radius, Rng& rng) const {
    if (center.r == 0.0) return point(radius * std::sqrt(rng.uniform()), rng.uniform(0.0, theta_));
    if (radius < center.r) {
      return exp(center, rng.uniform(0.0, 2.0 * std::numbers::pi), radius * std::sqrt(rng.uniform()));
    }
    for (;;) {
      const Point cand = point((center.r + radius) * std::sqrt(rng.uniform()), rng.uniform(0.0, theta_));
      if (distance(center, cand) <= radius) return cand;
    }
  }

 private:
  double theta_;
};

}  // namespace toponogov
