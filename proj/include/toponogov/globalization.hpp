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
 * @file globalization.hpp
 * @brief Local-to-global machinery for the angle comparison property.
 *
 * - subdivision_check: a hinge H_p(x,y) split at q on px into H_p(q,y),
 *   H_q(p,y), H_q(x,y). If the three pieces satisfy (A) and the angles at q
 *   sum to pi, H satisfies (A).
 * - thin_hinge_iteration: for a thin hinge (|px| < min{|py|/5, D - |py|})
 *   the hinge is repeatedly flipped: p_n is the point of p_{n-1}y_{n-1} at
 *   distance b' = 2|p_0y_0|/5 from y_{n-1}, x_n = y_{n-1}, y_n = x_{n-1}.
 *   Along the way a ladder of model hinges is built from distances only.
 *   The sums l_n = |p_nx_n| + |p_ny_n| and the model chords |xbar_n ybar_n|
 *   are both nonincreasing when the space has curvature >= k, and their
 *   difference tends to zero.
 * - globalize_check: splits an arbitrary hinge into thin pieces and runs the
 *   two steps above on all of them.
 * - defect_descent: follows failing pieces whose perimeter shrinks by more
 *   than a factor 4/5 per level.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "toponogov/comparison.hpp"
#include "toponogov/errors.hpp"
#include "toponogov/model.hpp"
#include "toponogov/spaces.hpp"
#include "toponogov/trig.hpp"

namespace toponogov {

inline constexpr double kDescentFactor = 0.8;

struct IterationStep {
  int n = 0;
  double l = 0.0;                 // |p_n x_n| + |p_n y_n|
  double comparison_chord = 0.0;  // |xbar_n ybar_n|
  double gamma = 0.0;             // upper angle of H_n
  double gamma_bar = 0.0;         // angle of the model hinge
  std::optional<double> omega_bar;
  double side_y = 0.0;  // |p_n y_n|
  // Auxiliary triple (p_{n-1}, p_n, y_n), absent for n = 0.
  std::optional<double> aux_perimeter;
  std::optional<double> aux_margin_prev;  // A-margin of H_{p_{n-1}}(p_n, y_n)
  std::optional<double> aux_margin_next;  // A-margin of H_{p_n}(p_{n-1}, y_n)
};

struct IterationTrace {
  double a0 = 0.0;
  double b0 = 0.0;
  double b_prime = 0.0;
  double chord0 = 0.0;  // |x_0 y_0|
  std::vector<IterationStep> steps;
};

// Near-straight angles lose accuracy like sqrt(eps / s) on small rungs, and
// the iteration drives gamma_n to pi, so its ladder stops at a coarser scale.
inline constexpr int kIterationRungs = 10;

struct IterationOptions {
  int n_max = 200;
  double min_decrement = 1e-12;
  LadderConfig ladder{std::nullopt, kIterationRungs};
};

template <GeodesicSpace S>
struct CandidateHinge {
  Hinge<S> hinge;
  double perimeter = 0.0;
  double margin = 0.0;
};

namespace detail {

template <GeodesicSpace S>
IterationTrace thin_iteration(Curvature k, const Hinge<S>& h0, const IterationOptions& opt,
                              std::vector<CandidateHinge<S>>* aux) {
  const S& space = h0.space();
  const double a = h0.side_y().length();
  const double b = h0.side_x().length();
  const ModelDiameter diam = model_diameter(k);
  if (!(b < std::min(a / 5.0, diam.headroom(a)))) {
    throw DomainError("thin_hinge_iteration: requires |p0x0| < min{|p0y0|/5, D_k - |p0y0|}");
  }
  const double bp = 0.4 * a;

  IterationTrace trace;
  trace.a0 = a;
  trace.b0 = b;
  trace.b_prime = bp;
  trace.chord0 = h0.opposite();

  Hinge<S> cur = h0;
  double gamma_prev = upper_angle(k, cur, opt.ladder).value;
  double l_prev = a + b;
  {
    IterationStep s0;
    s0.n = 0;
    s0.l = l_prev;
    s0.comparison_chord = side_from_sas(k, {b, a, gamma_prev});
    s0.gamma = gamma_prev;
    s0.gamma_bar = gamma_prev;
    s0.side_y = a;
    trace.steps.push_back(s0);
  }

  for (int n = 1; n <= opt.n_max; ++n) {
    const double len_y = cur.side_y().length();  // |p_{n-1} y_{n-1}|
    const double len_x = cur.side_x().length();  // |p_{n-1} x_{n-1}| = |p_{n-1} y_n|
    if (!(len_y > bp)) throw DomainError("thin_hinge_iteration: side shorter than b'");
    const double d_prev = len_y - bp;  // |p_{n-1} p_n|

    const auto pn = cur.side_y().point_at(d_prev);
    Segment<S> new_y = space.segment(pn, cur.x());
    Hinge<S> next(cur.side_y().sub(d_prev, len_y), new_y);
    const double d_new = new_y.length();  // |p_n y_n|

    IterationStep st;
    st.n = n;
    st.l = bp + d_new;
    st.gamma = upper_angle(k, next, opt.ladder).value;
    st.side_y = d_new;

    const double omega = angle_from_sss(k, {d_prev, len_x, d_new});
    const double at_pn = angle_from_sss(k, {d_prev, d_new, len_x});
    st.omega_bar = omega;
    st.comparison_chord = side_from_sas(k, {len_x, len_y, omega});
    st.gamma_bar = std::numbers::pi - at_pn;
    st.aux_perimeter = d_prev + len_x + d_new;

    Hinge<S> back(cur.side_y().sub(d_prev, 0.0), new_y);
    st.aux_margin_prev = gamma_prev - omega;
    st.aux_margin_next = upper_angle(k, back, opt.ladder).value - at_pn;
    if (aux != nullptr) {
      aux->push_back({Hinge<S>(cur.side_y().sub(0.0, d_prev), cur.side_x()), *st.aux_perimeter, *st.aux_margin_prev});
      aux->push_back({back, *st.aux_perimeter, *st.aux_margin_next});
    }
    trace.steps.push_back(st);

    const double decrement = l_prev - st.l;
    cur = next;
    gamma_prev = st.gamma;
    l_prev = st.l;
    if (decrement < opt.min_decrement) break;
  }
  return trace;
}

}  // namespace detail

/// Monotone flipping construction on a thin hinge H_0 = H_{p0}(x0, y0),
/// where side_x is the short side.
template <GeodesicSpace S>
IterationTrace thin_hinge_iteration(Curvature k, const Hinge<S>& h0, const IterationOptions& opt = {}) {
  return detail::thin_iteration<S>(k, h0, opt, nullptr);
}

struct SubdivisionRecord {
  double q = 0.0;             // arclength of q on px
  double margin_p_qy = 0.0;   // A-margin of H_p(q,y)
  double margin_q_py = 0.0;   // A-margin of H_q(p,y)
  double margin_q_xy = 0.0;   // A-margin of H_q(x,y)
  double balance_defect = 0.0;  // pi - <_q(p,y) - <_q(x,y)
  double margin_hinge = 0.0;  // A-margin of H_p(x,y)
  bool hypotheses_hold = false;
  bool implication_holds = false;
};

struct SubdivisionOptions {
  Tolerances tol;
  LadderConfig ladder;
};

/// Splits H_p(x,y) at the point q = side_x(q_arclength) using the segment
/// seg_qy (a fresh one if not given) and evaluates every number the
/// subdivision argument uses.
template <GeodesicSpace S>
SubdivisionRecord subdivision_check(Curvature k, const Hinge<S>& h, double q_arclength,
                                    const std::optional<Segment<S>>& seg_qy = std::nullopt,
                                    const SubdivisionOptions& opt = {}) {
  const double len = h.side_x().length();
  if (!(q_arclength > 0.0 && q_arclength < len)) throw DomainError("subdivision_check: q must be interior to px");
  if (!model_diameter(k).admits_perimeter_strict(h.perimeter())) {
    throw DomainError("subdivision_check: perimeter must be below 2 D_k");
  }
  const S& space = h.space();
  const auto q = h.side_x().point_at(q_arclength);
  const Segment<S> qy = seg_qy ? *seg_qy : space.segment(q, h.y());
  if (!(qy.length() > 0.0)) throw DomainError("subdivision_check: q coincides with y");

  const Hinge<S> h_p_qy(h.side_x().sub(0.0, q_arclength), h.side_y());
  const Hinge<S> h_q_py(h.side_x().sub(q_arclength, 0.0), qy);
  const Hinge<S> h_q_xy(h.side_x().sub(q_arclength, len), qy);

  const double ang_q_py = upper_angle(k, h_q_py, opt.ladder).value;
  const double ang_q_xy = upper_angle(k, h_q_xy, opt.ladder).value;

  SubdivisionRecord r;
  r.q = q_arclength;
  r.margin_p_qy = angle_margin(k, h_p_qy, opt.ladder);
  r.margin_q_py = ang_q_py - comparison_angle(k, space, q, h.vertex(), h.y());
  r.margin_q_xy = ang_q_xy - comparison_angle(k, space, q, h.x(), h.y());
  r.balance_defect = std::numbers::pi - ang_q_py - ang_q_xy;
  r.margin_hinge = angle_margin(k, h, opt.ladder);
  const double tol = opt.tol.angle;
  r.hypotheses_hold = r.margin_p_qy >= -tol && r.margin_q_py >= -tol && r.margin_q_xy >= -tol &&
                      std::abs(r.balance_defect) <= tol;
  r.implication_holds = !r.hypotheses_hold || r.margin_hinge >= -tol;
  return r;
}

struct GlobalizeOptions {
  Tolerances tol;
  LadderConfig ladder;
  IterationOptions iteration;
  int max_pieces = 4000;
};

template <GeodesicSpace S>
struct GlobalizeResult {
  Verdict verdict;  // minimum over every sub-check
  Verdict direct;   // check_property(A) on the hinge itself
  std::vector<SubdivisionRecord> levels;
  std::vector<IterationTrace> thin_traces;
};

namespace detail {

template <GeodesicSpace S>
struct Decomposition {
  std::vector<SubdivisionRecord> levels;
  std::vector<Hinge<S>> pieces;  // thin, short side first
  std::vector<double> piece_margins;
  std::vector<CandidateHinge<S>> candidates;
};

inline bool is_thin(const ModelDiameter& d, double short_side, double long_side) {
  return short_side < std::min(long_side / 5.0, d.headroom(long_side));
}

// Peels thin pieces off the shorter side, starting at the vertex.
template <GeodesicSpace S>
Decomposition<S> decompose(Curvature k, const Hinge<S>& hinge, const GlobalizeOptions& opt) {
  const S& space = hinge.space();
  const ModelDiameter diam = model_diameter(k);
  const SubdivisionOptions sub_opt{opt.tol, opt.ladder};

  Decomposition<S> out;
  Hinge<S> cur = hinge.side_x().length() <= hinge.side_y().length() ? hinge : hinge.swapped();
  for (int count = 0;; ++count) {
    if (count > opt.max_pieces) throw DomainError("globalize: too many pieces (is y close to the subdivided side?)");
    const double remaining = cur.side_x().length();
    const double to_y = cur.side_y().length();
    if (is_thin(diam, remaining, to_y)) {
      out.pieces.push_back(cur);
      out.piece_margins.push_back(out.levels.empty() ? angle_margin(k, cur, opt.ladder) : out.levels.back().margin_q_xy);
      break;
    }
    double step = std::min(0.16 * to_y, 0.45 * diam.headroom(to_y));
    step = std::min(step, 0.5 * remaining);
    for (int shrink = 0;; ++shrink) {
      const auto q = cur.side_x().point_at(step);
      const double q_to_y = space.distance(q, cur.y());
      if (is_thin(diam, step, to_y) && is_thin(diam, step, q_to_y)) break;
      if (shrink > 60) throw DomainError("globalize: cannot find a thin subdivision step");
      step *= 0.5;
    }
    const auto q = cur.side_x().point_at(step);
    const Segment<S> qy = space.segment(q, cur.y());
    const SubdivisionRecord rec = subdivision_check(k, cur, step, std::optional<Segment<S>>(qy), sub_opt);
    out.levels.push_back(rec);

    Hinge<S> near(cur.side_x().sub(0.0, step), cur.side_y());
    Hinge<S> back(cur.side_x().sub(step, 0.0), qy);
    Hinge<S> rest(cur.side_x().sub(step, remaining), qy);
    out.pieces.push_back(near);
    out.piece_margins.push_back(rec.margin_p_qy);
    out.pieces.push_back(back);
    out.piece_margins.push_back(rec.margin_q_py);
    out.candidates.push_back({near, near.perimeter(), rec.margin_p_qy});
    out.candidates.push_back({back, back.perimeter(), rec.margin_q_py});
    out.candidates.push_back({rest, rest.perimeter(), rec.margin_q_xy});
    cur = rest;
  }
  return out;
}

}  // namespace detail

/// Checks (A) for an arbitrary hinge through the subdivision chain and the
/// thin iteration on every piece. The verdict margin is the minimum of all
/// angle margins and negated balance defects that the argument relies on.
template <GeodesicSpace S>
GlobalizeResult<S> globalize_check(Curvature k, const Hinge<S>& hinge, const GlobalizeOptions& opt = {}) {
  if (!model_diameter(k).admits_perimeter_strict(hinge.perimeter())) {
    throw DomainError("globalize_check: perimeter must be below 2 D_k");
  }
  detail::Decomposition<S> dec = detail::decompose(k, hinge, opt);

  double worst = std::numeric_limits<double>::infinity();
  std::map<std::string, double> witness;
  auto consider = [&](double m, double stage, double index, double step) {
    if (m < worst) {
      worst = m;
      witness = {{"stage", stage}, {"index", index}, {"step", step}};
    }
  };

  for (std::size_t i = 0; i < dec.levels.size(); ++i) {
    const SubdivisionRecord& r = dec.levels[i];
    const double idx = static_cast<double>(i);
    consider(r.margin_hinge, 0, idx, 0);
    consider(r.margin_p_qy, 0, idx, 1);
    consider(r.margin_q_py, 0, idx, 2);
    consider(r.margin_q_xy, 0, idx, 3);
    consider(-std::abs(r.balance_defect), 0, idx, 4);
  }

  GlobalizeResult<S> result;
  for (std::size_t i = 0; i < dec.pieces.size(); ++i) {
    consider(dec.piece_margins[i], 1, static_cast<double>(i), 0);
    IterationTrace tr = detail::thin_iteration<S>(k, dec.pieces[i], opt.iteration, nullptr);
    for (const IterationStep& st : tr.steps) {
      if (st.aux_margin_prev) consider(*st.aux_margin_prev, 2, static_cast<double>(i), st.n);
      if (st.aux_margin_next) consider(*st.aux_margin_next, 2, static_cast<double>(i), st.n);
    }
    result.thin_traces.push_back(std::move(tr));
  }

  result.verdict = make_verdict(Property::kAngle, k, worst, opt.tol.angle, witness);
  result.verdict.witness["pieces"] = static_cast<double>(dec.pieces.size());
  result.direct = check_property(Property::kAngle, k, hinge, CheckOptions{16, opt.tol, opt.ladder});
  result.levels = std::move(dec.levels);
  return result;
}

template <GeodesicSpace S>
struct DescentLevel {
  Hinge<S> hinge;
  double perimeter = 0.0;
  double margin = 0.0;
};

template <GeodesicSpace S>
struct DescentTrace {
  std::vector<DescentLevel<S>> hinges;
  typename S::Point limit_point_estimate;
  std::string stop_reason;  // "max_depth", "no_failing_candidate" or "numerical_limit"
};

struct DescentOptions {
  int max_depth = 40;
  GlobalizeOptions globalize;
};

/// Starting from a hinge that fails (A), repeatedly picks a failing hinge
/// among the pieces and auxiliary hinges of the current one whose perimeter
/// is below 4/5 of the current perimeter. Among several, the one with the
/// most negative margin is taken.
template <GeodesicSpace S>
DescentTrace<S> defect_descent(Curvature k, const Hinge<S>& failing, const DescentOptions& opt = {}) {
  const double tol = opt.globalize.tol.angle;
  const double m0 = angle_margin(k, failing, opt.globalize.ladder);
  if (!(m0 < -tol)) throw PreconditionError("defect_descent: the start hinge satisfies (A)");
  if (!model_diameter(k).admits_perimeter_strict(failing.perimeter())) {
    throw DomainError("defect_descent: perimeter must be below 2 D_k");
  }

  DescentTrace<S> trace;
  trace.hinges.push_back({failing, failing.perimeter(), m0});
  trace.stop_reason = "max_depth";
  for (int depth = 1; depth <= opt.max_depth; ++depth) {
    const DescentLevel<S>& cur = trace.hinges.back();
    std::vector<CandidateHinge<S>> family;
    try {
      detail::Decomposition<S> dec = detail::decompose(k, cur.hinge, opt.globalize);
      family = std::move(dec.candidates);
      for (const Hinge<S>& piece : dec.pieces) {
        detail::thin_iteration<S>(k, piece, opt.globalize.iteration, &family);
      }
    } catch (const InconsistencyError&) {
      // Rounding of the point coordinates dominates at this size.
      trace.stop_reason = "numerical_limit";
      break;
    }

    const CandidateHinge<S>* best = nullptr;
    for (const CandidateHinge<S>& c : family) {
      if (!(c.perimeter < kDescentFactor * cur.perimeter) || !(c.margin < -tol)) continue;
      if (best == nullptr || c.margin < best->margin || (c.margin == best->margin && c.perimeter < best->perimeter)) {
        best = &c;
      }
    }
    if (best == nullptr) {
      trace.stop_reason = "no_failing_candidate";
      break;
    }
    trace.hinges.push_back({best->hinge, best->perimeter, best->margin});
  }
  trace.limit_point_estimate = trace.hinges.back().hinge.vertex();
  return trace;
}

}  // namespace toponogov
