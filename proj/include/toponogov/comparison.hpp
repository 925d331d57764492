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
 * @file comparison.hpp
 * @brief Hinges, Alexandrov angles and the comparison properties.
 *
 * For a hinge H_p(x,y) and a curvature k the three properties checked here
 * are
 *   (A) angle:    upper angle of H >= comparison angle of (p, x, y),
 *   (H) hinge:    |xy| <= third side of the model hinge with the same sides
 *                 and the same angle as H,
 *   (D) distance: |uv| >= |ubar vbar| for u on px, v on py and their
 *                 counterparts on the sides of the comparison triangle.
 *
 * The upper angle is the limsup of comparison angles of points approaching
 * the vertex along the sides; it is evaluated on a geometric scale ladder.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toponogov/errors.hpp"
#include "toponogov/model.hpp"
#include "toponogov/random.hpp"
#include "toponogov/spaces.hpp"
#include "toponogov/trig.hpp"

namespace toponogov {

struct Tolerances {
  double angle = 1e-6;     // absolute, radians
  double distance = 1e-8;  // relative to the hinge perimeter
};

/// Vertex p with two nondegenerate segments px and py.
template <GeodesicSpace S>
class Hinge {
 public:
  using Point = typename S::Point;

  Hinge(Segment<S> side_x, Segment<S> side_y) : side_x_(std::move(side_x)), side_y_(std::move(side_y)) {
    if (!(side_x_.length() > 0.0) || !(side_y_.length() > 0.0)) {
      throw DomainError("hinge: sides must be nondegenerate");
    }
    const double gap = space().distance(side_x_.start(), side_y_.start());
    if (gap > 1e-9 * std::max(1.0, side_x_.length() + side_y_.length())) {
      throw DomainError("hinge: sides do not share their initial point");
    }
  }

  const S& space() const { return side_x_.space(); }
  const Point& vertex() const { return side_x_.start(); }
  const Point& x() const { return side_x_.end(); }
  const Point& y() const { return side_y_.end(); }
  const Segment<S>& side_x() const { return side_x_; }
  const Segment<S>& side_y() const { return side_y_; }

  double opposite() const { return space().distance(x(), y()); }
  double perimeter() const { return side_x_.length() + side_y_.length() + opposite(); }

  Hinge swapped() const { return Hinge(side_y_, side_x_); }

 private:
  Segment<S> side_x_;
  Segment<S> side_y_;
};

template <GeodesicSpace S>
Hinge<S> make_hinge(const S& space, const typename S::Point& p, const typename S::Point& x,
                    const typename S::Point& y) {
  return Hinge<S>(space.segment(p, x), space.segment(p, y));
}

inline double perimeter(double d_px, double d_py, double d_xy) { return d_px + d_py + d_xy; }

/// Comparison angle at p of the triple (p, x, y).
template <GeodesicSpace S>
double comparison_angle(Curvature k, const S& space, const typename S::Point& p, const typename S::Point& x,
                        const typename S::Point& y) {
  const double d_px = space.distance(p, x);
  const double d_py = space.distance(p, y);
  const double d_xy = space.distance(x, y);
  if (!(d_px > 0.0) || !(d_py > 0.0)) throw DomainError("comparison_angle: vertex coincides with an endpoint");
  const ModelDiameter d = model_diameter(k);
  if (!d.exceeds(d_px) || !d.exceeds(d_py) || !d.admits_perimeter(perimeter(d_px, d_py, d_xy))) {
    throw DomainError("comparison_angle: no comparison triangle for this curvature");
  }
  return angle_from_sss(k, {d_py, d_px, d_xy});
}

struct LadderConfig {
  std::optional<double> initial_scale;  // defaults to the shorter side
  int rungs = 20;
};

struct AngleEstimate {
  double value = 0.0;
  double uncertainty = 0.0;
  std::vector<std::pair<double, double>> samples;  // (scale, comparison angle)
};

/// Upper angle of a hinge: comparison angles of u = side_x(s), v = side_y(s)
/// on the ladder s_i = s0 2^-i. For k > 0 the default s0 is capped at D_k/4
/// so that every rung admits a comparison triangle.
template <GeodesicSpace S>
AngleEstimate upper_angle(Curvature k, const Hinge<S>& h, const LadderConfig& cfg = {}) {
  const double shortest = std::min(h.side_x().length(), h.side_y().length());
  double s0 = shortest;
  if (cfg.initial_scale) {
    s0 = *cfg.initial_scale;
    if (!(s0 > 0.0) || s0 > shortest * (1.0 + 1e-12)) {
      throw DomainError("upper_angle: initial scale must lie in (0, shortest side]");
    }
  } else if (const ModelDiameter d = model_diameter(k); d.is_bounded()) {
    s0 = std::min(s0, 0.25 * d.value());
  }
  if (cfg.rungs < 2) throw DomainError("upper_angle: need at least two rungs");

  AngleEstimate est;
  est.samples.reserve(static_cast<std::size_t>(cfg.rungs));
  double s = s0;
  for (int i = 0; i < cfg.rungs; ++i, s *= 0.5) {
    const auto u = h.side_x().point_at(s);
    const auto v = h.side_y().point_at(s);
    est.samples.emplace_back(s, comparison_angle(k, h.space(), h.vertex(), u, v));
  }
  est.value = est.samples.back().second;
  est.uncertainty = std::abs(est.value - est.samples[est.samples.size() - 2].second);
  return est;
}

template <GeodesicSpace S>
AngleEstimate upper_angle(Curvature k, const S& /*space*/, const Hinge<S>& h, const LadderConfig& cfg = {}) {
  return upper_angle(k, h, cfg);
}

enum class Property { kAngle, kHinge, kDistance, kBalanced };

inline const char* property_name(Property p) {
  switch (p) {
    case Property::kAngle: return "A";
    case Property::kHinge: return "H";
    case Property::kDistance: return "D";
    case Property::kBalanced: return "balanced";
  }
  return "?";
}

inline Property parse_property(const std::string& s) {
  if (s == "A") return Property::kAngle;
  if (s == "H") return Property::kHinge;
  if (s == "D") return Property::kDistance;
  if (s == "balanced") return Property::kBalanced;
  throw DomainError("unknown property '" + s + "'");
}

/// Outcome of a comparison check. passed iff worst_margin >= -tolerance.
struct Verdict {
  Property property = Property::kAngle;
  Curvature kappa;
  bool passed = false;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  std::map<std::string, double> witness;
};

inline Verdict make_verdict(Property p, Curvature k, double margin, double tol, std::map<std::string, double> witness) {
  return {p, k, margin >= -tol, margin, tol, std::move(witness)};
}

struct CheckOptions {
  int grid = 16;
  Tolerances tol;
  LadderConfig ladder;
};

/// Third side of the model hinge, with the degenerate cases of a zero side.
inline double model_chord(Curvature k, double su, double sv, double gamma) {
  if (su <= 0.0) return sv;
  if (sv <= 0.0) return su;
  return side_from_sas(k, {su, sv, gamma});
}

template <GeodesicSpace S>
Verdict check_property(Property prop, Curvature k, const Hinge<S>& h, const CheckOptions& opt = {}) {
  const S& space = h.space();
  const double d_px = h.side_x().length();
  const double d_py = h.side_y().length();
  const double d_xy = h.opposite();
  const double per = perimeter(d_px, d_py, d_xy);
  if (!model_diameter(k).admits_perimeter_strict(per)) {
    throw DomainError("check_property: perimeter must be below 2 D_k");
  }
  const double dist_tol = opt.tol.distance * per;

  switch (prop) {
    case Property::kAngle: {
      const AngleEstimate ua = upper_angle(k, h, opt.ladder);
      const double cmp = comparison_angle(k, space, h.vertex(), h.x(), h.y());
      return make_verdict(prop, k, ua.value - cmp, opt.tol.angle,
                          {{"upper_angle", ua.value}, {"comparison_angle", cmp}, {"uncertainty", ua.uncertainty}});
    }
    case Property::kHinge: {
      const AngleEstimate ua = upper_angle(k, h, opt.ladder);
      const double model = side_from_sas(k, {d_px, d_py, ua.value});
      return make_verdict(prop, k, model - d_xy, dist_tol,
                          {{"upper_angle", ua.value}, {"model_chord", model}, {"chord", d_xy}});
    }
    case Property::kDistance: {
      if (opt.grid < 1) throw DomainError("check_property: grid must be positive");
      const double gamma = comparison_angle(k, space, h.vertex(), h.x(), h.y());
      std::vector<double> fractions;
      for (int i = 0; i < opt.grid; ++i) fractions.push_back(static_cast<double>(i + 1) / opt.grid);
      double worst = std::numeric_limits<double>::infinity();
      double wu = 0.0;
      double wv = 0.0;
      auto probe = [&](double fu, double fv) {
        const double su = fu * d_px;
        const double sv = fv * d_py;
        const double margin = space.distance(h.side_x().point_at(su), h.side_y().point_at(sv)) -
                              model_chord(k, su, sv, gamma);
        if (margin < worst) {
          worst = margin;
          wu = su;
          wv = sv;
        }
      };
      for (double fu : fractions) {
        for (double fv : fractions) probe(fu, fv);
      }
      for (double fu : {0.0, 1.0}) {
        for (double fv : {0.0, 1.0}) probe(fu, fv);
      }
      return make_verdict(prop, k, worst, dist_tol, {{"u", wu}, {"v", wv}, {"comparison_angle", gamma}});
    }
    case Property::kBalanced:
      break;
  }
  throw DomainError("check_property: use check_balanced for balancedness");
}

template <GeodesicSpace S>
Verdict check_property(Property prop, Curvature k, const S& /*space*/, const Hinge<S>& h, const CheckOptions& opt = {}) {
  return check_property(prop, k, h, opt);
}

/// A-margin only (upper angle minus comparison angle), for callers that
/// need the number rather than a verdict.
template <GeodesicSpace S>
double angle_margin(Curvature k, const Hinge<S>& h, const LadderConfig& ladder = {}) {
  return upper_angle(k, h, ladder).value - comparison_angle(k, h.space(), h.vertex(), h.x(), h.y());
}

template <GeodesicSpace S>
struct BalanceProbe {
  double q = 0.0;  // arclength of the probe point on the segment
  typename S::Point y;
};

/// Balance of a segment px at the probe points: for q on px and a segment
/// qy, the angles <_q(p,y) and <_q(x,y) must sum to pi. The verdict margin
/// is -max |pi - sum|; witness["max_excess"] is max(pi - sum), which is
/// <= tolerance whenever the angle triangle inequality holds.
template <GeodesicSpace S>
Verdict check_balanced(const S& space, const Segment<S>& seg, const std::vector<BalanceProbe<S>>& probes,
                       const CheckOptions& opt = {}) {
  const Curvature flat{0.0};
  double worst = 0.0;
  double max_excess = -std::numeric_limits<double>::infinity();
  std::map<std::string, double> witness{{"probe", 0.0}, {"q", 0.0}, {"defect", 0.0}};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double t = probes[i].q;
    if (!(t > 0.0) || !(t < seg.length())) throw DomainError("check_balanced: probe point must be interior");
    const auto q = seg.point_at(t);
    const Segment<S> qy = space.segment(q, probes[i].y);
    if (!(qy.length() > 0.0)) throw DomainError("check_balanced: probe endpoint coincides with q");
    const double toward_p = upper_angle(flat, Hinge<S>(seg.sub(t, 0.0), qy), opt.ladder).value;
    const double toward_x = upper_angle(flat, Hinge<S>(seg.sub(t, seg.length()), qy), opt.ladder).value;
    const double defect = std::numbers::pi - toward_p - toward_x;
    max_excess = std::max(max_excess, defect);
    if (i == 0 || -std::abs(defect) < worst) {
      worst = -std::abs(defect);
      witness["probe"] = static_cast<double>(i);
      witness["q"] = t;
      witness["defect"] = defect;
    }
  }
  witness["max_excess"] = probes.empty() ? 0.0 : max_excess;
  return make_verdict(Property::kBalanced, flat, worst, opt.tol.angle, std::move(witness));
}

/// Random hinge with all three points within `radius` of `center` and
/// sides of length at least `min_side`.
template <GeodesicSpace S>
Hinge<S> sample_hinge_near(const S& space, const typename S::Point& center, double radius, double min_side,
                           Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const auto p = space.sample_near(center, radius, rng);
    const auto x = space.sample_near(center, radius, rng);
    const auto y = space.sample_near(center, radius, rng);
    if (space.distance(p, x) < min_side || space.distance(p, y) < min_side) continue;
    return make_hinge(space, p, x, y);
  }
  throw EstimationError("sample_hinge_near: could not draw a nondegenerate hinge");
}

struct CurvatureEstimateOptions {
  int samples = 32;
  std::uint64_t seed = 0;
  double width = 1e-2;
  CheckOptions check;
};

struct CurvatureEstimate {
  Curvature kappa;
  double lower = 0.0;  // largest curvature observed to pass
  double upper = 0.0;  // smallest curvature observed to fail
  int evaluations = 0;
};

/// Bisection for the largest k such that every sampled hinge of diameter
/// <= scale around base_point satisfies (D_k).
template <GeodesicSpace S>
CurvatureEstimate estimate_curvature_floor(const S& space, const typename S::Point& base_point, double scale,
                                           std::pair<double, double> bracket,
                                           const CurvatureEstimateOptions& opt = {}) {
  if (!(scale > 0.0)) throw DomainError("estimate_curvature_floor: scale must be positive");
  if (!(bracket.first < bracket.second)) throw EstimationError("estimate_curvature_floor: empty bracket");
  Rng rng(opt.seed);
  std::vector<Hinge<S>> hinges;
  hinges.reserve(static_cast<std::size_t>(opt.samples));
  for (int i = 0; i < opt.samples; ++i) {
    hinges.push_back(sample_hinge_near(space, base_point, 0.5 * scale, 0.05 * scale, rng));
  }

  CurvatureEstimate out;
  auto all_pass = [&](double kappa) {
    ++out.evaluations;
    for (const auto& h : hinges) {
      if (!check_property(Property::kDistance, Curvature{kappa}, h, opt.check).passed) return false;
    }
    return true;
  };

  double lo = bracket.first;
  double hi = bracket.second;
  if (!all_pass(lo) || all_pass(hi)) {
    throw EstimationError("estimate_curvature_floor: bracket does not separate passing and failing curvatures");
  }
  while (hi - lo >= opt.width) {
    const double mid = 0.5 * (lo + hi);
    if (all_pass(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.kappa = Curvature{0.5 * (lo + hi)};
  out.lower = lo;
  out.upper = hi;
  return out;
}

}  // namespace toponogov
