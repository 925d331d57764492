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
 * @file model.hpp
 * @brief Triangle solvers in the model plane of curvature k.
 *
 * Everything here works on side lengths and angles only. The law of cosines
 * is used in its half-angle form
 *
 *   sn^2(c/2) = sn^2((a-b)/2) + sn(a) sn(b) sin^2(g/2)
 *             = sn^2((a+b)/2) - sn(a) sn(b) cos^2(g/2),
 *
 * and the inverse problem factors the differences of squares with
 * sn^2(u) - sn^2(v) = sn(u+v) sn(u-v), which keeps near-degenerate
 * triangles accurate.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "toponogov/errors.hpp"
#include "toponogov/trig.hpp"

namespace toponogov {

/// Side lengths of a model triangle. `a` and `b` are the sides adjacent to
/// the angle of interest and `c` is the side opposite to it.
struct TriangleData {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Two sides issuing from a vertex and the angle between them.
struct HingeSAS {
  double b_side = 0.0;  // |px|
  double a_side = 0.0;  // |py|
  double gamma = 0.0;
};

/// Distances of two consecutive hinges H_p(q,y) and H_q(x,y).
struct AlexandrovConfig {
  double d_pq = 0.0;
  double d_qx = 0.0;
  double d_qy = 0.0;
  double d_py = 0.0;
  double d_xy = 0.0;
};

struct AlexandrovComparison {
  double defect_at_q = 0.0;     // pi - <_q(p,y) - <_q(x,y)
  double angle_gap_at_p = 0.0;  // <_p(q,y) - <_pbar(xbar,ybar)
};

// Squared sines may be clamped into [0,1] by at most this much.
inline constexpr double kClampTolerance = 1e-9;

// Default sign tolerance for alexandrov_compare.
inline constexpr double kAlexandrovSignTolerance = 1e-8;

namespace detail {

inline double rel_slack(double scale) { return 1e-12 * std::max(1.0, scale); }

inline void check_finite_nonnegative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) throw DomainError(std::string(what) + ": lengths must be finite and nonnegative");
}

inline void check_triangle(Curvature k, double a, double b, double c, const char* what) {
  check_finite_nonnegative(a, what);
  check_finite_nonnegative(b, what);
  check_finite_nonnegative(c, what);
  const double per = a + b + c;
  const double slack = rel_slack(per);
  if (c > a + b + slack || a > b + c + slack || b > a + c + slack) {
    throw DomainError(std::string(what) + ": triangle inequality violated");
  }
  const ModelDiameter d = model_diameter(k);
  if (d.is_bounded()) {
    const double dd = d.value() + rel_slack(d.value());
    if (a > dd || b > dd || c > dd) throw DomainError(std::string(what) + ": side exceeds the model diameter");
    if (per > 2.0 * dd) throw DomainError(std::string(what) + ": perimeter exceeds twice the model diameter");
  }
}

// Clamp a value that should lie in [0, 1].
inline double clamp_unit(double v, const char* what) {
  if (v < -kClampTolerance || v > 1.0 + kClampTolerance) {
    throw InconsistencyError(std::string(what) + ": squared trigonometric value outside [0,1] beyond tolerance");
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace detail

/// True iff a comparison triple in M^2_k exists for the three distances,
/// i.e. k <= 0 or the perimeter is at most 2 D_k.
inline bool triple_exists(Curvature k, double d_px, double d_py, double d_xy) {
  detail::check_finite_nonnegative(d_px, "triple_exists");
  detail::check_finite_nonnegative(d_py, "triple_exists");
  detail::check_finite_nonnegative(d_xy, "triple_exists");
  const double per = d_px + d_py + d_xy;
  const double slack = detail::rel_slack(per);
  if (d_xy > d_px + d_py + slack || d_px > d_py + d_xy + slack || d_py > d_px + d_xy + slack) {
    throw DomainError("triple_exists: triangle inequality violated");
  }
  return model_diameter(k).admits_perimeter(per);
}

/// The function c_{a,b}(gamma): length of the third side of the model hinge
/// with sides a, b and angle gamma. Continuous and strictly increasing in
/// gamma; for k > 0 the solution is taken on the branch c/2 <= D_k/2.
inline double side_from_sas(Curvature k, const HingeSAS& h) {
  const double a = h.a_side;
  const double b = h.b_side;
  const ModelDiameter d = model_diameter(k);
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !d.exceeds(a) || !d.exceeds(b)) {
    throw DomainError("side_from_sas: sides must lie in (0, D_k)");
  }
  double gamma = h.gamma;
  if (!(gamma >= -1e-12 && gamma <= std::numbers::pi + 1e-12)) {
    throw DomainError("side_from_sas: angle must lie in [0, pi]");
  }
  gamma = std::clamp(gamma, 0.0, std::numbers::pi);

  const double prod = sn(k, a) * sn(k, b);
  double half_sq;
  if (gamma <= 0.5 * std::numbers::pi) {
    const double s = sn(k, 0.5 * (a - b));
    const double sh = std::sin(0.5 * gamma);
    half_sq = s * s + prod * sh * sh;
  } else {
    const double s = sn(k, 0.5 * (a + b));
    const double ch = std::cos(0.5 * gamma);
    half_sq = s * s - prod * ch * ch;
  }
  return 2.0 * asn(k, std::sqrt(std::max(half_sq, 0.0)));
}

/// Angle between sides a and b of the model triangle with sides (a, b, c),
/// i.e. the unique gamma in [0, pi] with side_from_sas(a, b, gamma) = c.
inline double angle_from_sss(Curvature k, const TriangleData& t) {
  detail::check_triangle(k, t.a, t.b, t.c, "angle_from_sss");
  if (!(t.a > 0.0) || !(t.b > 0.0)) throw DomainError("angle_from_sss: adjacent sides must be positive");
  const ModelDiameter d = model_diameter(k);
  if (!d.exceeds(t.a) || !d.exceeds(t.b)) throw DomainError("angle_from_sss: adjacent sides must be below D_k");

  const double den = sn(k, t.a) * sn(k, t.b);
  // sn^2(c/2) - sn^2((a-b)/2) and sn^2((a+b)/2) - sn^2(c/2), factored.
  const double num_sin = sn(k, 0.5 * (t.c - t.a + t.b)) * sn(k, 0.5 * (t.c + t.a - t.b));
  const double num_cos = sn(k, 0.5 * (t.a + t.b + t.c)) * sn(k, 0.5 * (t.a + t.b - t.c));
  const double sin_sq = detail::clamp_unit(num_sin / den, "angle_from_sss");
  const double cos_sq = detail::clamp_unit(num_cos / den, "angle_from_sss");
  return 2.0 * std::atan2(std::sqrt(sin_sq), std::sqrt(cos_sq));
}

/// Distance from the vertex opposite side c to the midpoint of side c, from
/// 2 cs(c/2) md(l) = md(a) + md(b) - 2 md(c/2).
inline double midpoint_distance(Curvature k, const TriangleData& t) {
  detail::check_triangle(k, t.a, t.b, t.c, "midpoint_distance");
  const double ch = cs(k, 0.5 * t.c);
  if (!model_diameter(k).exceeds(t.c) || !(ch > 0.0)) throw DomainError("midpoint_distance: requires cs(c/2) > 0");
  const double rhs = md(k, t.a) + md(k, t.b) - 2.0 * md(k, 0.5 * t.c);
  const double scale = md(k, t.a) + md(k, t.b) + 2.0 * md(k, 0.5 * t.c);
  double m = rhs / (2.0 * ch);
  if (m < 0.0) {
    if (rhs < -kClampTolerance * std::max(1.0, scale)) {
      throw InconsistencyError("midpoint_distance: negative modified distance beyond tolerance");
    }
    m = 0.0;
  }
  return 2.0 * asn(k, std::sqrt(0.5 * m));
}

/// Both sides of the equivalence in Alexandrov's lemma for the hinges
/// H_p(q,y), H_q(x,y) and the straightened triangle with |pbar xbar| =
/// |pq| + |qx|. The two outputs have the same sign.
inline AlexandrovComparison alexandrov_compare(Curvature k, const AlexandrovConfig& cfg) {
  const ModelDiameter d = model_diameter(k);
  if (!d.exceeds(cfg.d_py) || !d.exceeds(cfg.d_qy) || !d.exceeds(cfg.d_pq + cfg.d_qx)) {
    throw DomainError("alexandrov_compare: |py|, |qy| and |pq|+|qx| must be below D_k");
  }
  const double at_q_p = angle_from_sss(k, {cfg.d_pq, cfg.d_qy, cfg.d_py});
  const double at_q_x = angle_from_sss(k, {cfg.d_qx, cfg.d_qy, cfg.d_xy});
  const double at_p = angle_from_sss(k, {cfg.d_pq, cfg.d_py, cfg.d_qy});
  const double at_pbar = angle_from_sss(k, {cfg.d_pq + cfg.d_qx, cfg.d_py, cfg.d_xy});
  return {std::numbers::pi - at_q_p - at_q_x, at_p - at_pbar};
}

/// Sign agreement of the two lemma quantities up to `tol`.
inline bool signs_agree(const AlexandrovComparison& r, double tol = kAlexandrovSignTolerance) {
  if (r.defect_at_q > tol && r.angle_gap_at_p < -tol) return false;
  if (r.defect_at_q < -tol && r.angle_gap_at_p > tol) return false;
  return true;
}

}  // namespace toponogov
