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
 * @file scenario.hpp
 * @brief Reproducible experiments over the library, with JSON/CSV reports.
 *
 * A ScenarioConfig names one of the scenarios below together with a space,
 * a curvature and scenario parameters. run_scenario evaluates it and returns
 * a Report; emit_report writes the report as a single JSON object or as CSV
 * tables. Identical configs give byte-identical JSON.
 */
#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "toponogov/comparison.hpp"
#include "toponogov/errors.hpp"
#include "toponogov/globalization.hpp"
#include "toponogov/io.hpp"
#include "toponogov/model.hpp"
#include "toponogov/random.hpp"
#include "toponogov/spaces.hpp"
#include "toponogov/trig.hpp"

namespace toponogov::cli {

using io::Json;

inline constexpr const char* kArtifact = "toponogov";
inline constexpr const char* kVersion = "0.1.0";

/// Bad command line or config.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"trig-identities", "triangle-solvers", "alexandrov-lemma",
                                              "property-check",  "balanced-check",   "curvature-estimate",
                                              "thin-iteration",  "globalize",        "defect-descent"};
  return names;
}

struct ScenarioConfig {
  std::string scenario;
  Json space = Json{{"space", "plane"}};
  double kappa = 0.0;
  Json hinge;    // preset name, {"a","b","gamma"} or {"vertex","x","y"}; null for the default
  Json segment;  // {"from","to"} for balanced-check; null for the default
  Json probes;   // list of {"q","y"} for balanced-check; null for random probes
  std::string property = "A";
  Tolerances tol;
  int grid = 16;
  int rungs = 20;
  int iteration_rungs = kIterationRungs;
  std::uint64_t seed = 0;
  int n_max = 200;
  int max_depth = 40;
  int samples = 0;  // 0 selects the scenario default
  int probe_count = 7;
  double scale = 0.5;
  std::array<double, 2> bracket{-4.0, 8.0};
  std::string format = "json";
  bool timing = false;
};

struct Report {
  Json config;
  Json result;
  std::vector<io::Table> tables;
  std::optional<double> wall_time;
};

// --- config ----------------------------------------------------------------

namespace detail {

inline double finite_number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw UsageError("config: '" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw UsageError("config: '" + key + "' must be finite");
  return v;
}

inline int positive_int(const Json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1 || j.get<std::int64_t>() > 100000000) {
    throw UsageError("config: '" + key + "' must be a positive integer");
  }
  return static_cast<int>(j.get<std::int64_t>());
}

}  // namespace detail

/// Reads a config object. Unknown keys are rejected so that typos do not
/// silently fall back to defaults.
inline ScenarioConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  ScenarioConfig c;
  Json shorthand = Json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (key == "scenario") {
      if (!v.is_string()) throw UsageError("config: 'scenario' must be a string");
      c.scenario = v.get<std::string>();
    } else if (key == "space") {
      c.space = v;
    } else if (key == "kappa") {
      c.kappa = detail::finite_number(v, key);
    } else if (key == "hinge") {
      c.hinge = v;
    } else if (key == "segment") {
      c.segment = v;
    } else if (key == "probes") {
      c.probes = v;
    } else if (key == "a" || key == "b" || key == "gamma") {
      shorthand[key] = detail::finite_number(v, key);
    } else if (key == "property") {
      if (!v.is_string()) throw UsageError("config: 'property' must be a string");
      c.property = v.get<std::string>();
    } else if (key == "tolerances") {
      if (!v.is_object()) throw UsageError("config: 'tolerances' must be an object");
      if (v.contains("angle")) c.tol.angle = detail::finite_number(v.at("angle"), "tolerances.angle");
      if (v.contains("distance")) c.tol.distance = detail::finite_number(v.at("distance"), "tolerances.distance");
    } else if (key == "grid") {
      c.grid = detail::positive_int(v, key);
    } else if (key == "rungs") {
      c.rungs = detail::positive_int(v, key);
    } else if (key == "iteration_rungs") {
      c.iteration_rungs = detail::positive_int(v, key);
    } else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw UsageError("config: 'seed' must be a nonnegative integer");
      }
      c.seed = v.get<std::uint64_t>();
    } else if (key == "n_max") {
      c.n_max = detail::positive_int(v, key);
    } else if (key == "max_depth") {
      c.max_depth = detail::positive_int(v, key);
    } else if (key == "samples") {
      c.samples = v.is_number_integer() && v.get<std::int64_t>() == 0 ? 0 : detail::positive_int(v, key);
    } else if (key == "probe_count") {
      c.probe_count = detail::positive_int(v, key);
    } else if (key == "scale") {
      c.scale = detail::finite_number(v, key);
    } else if (key == "bracket") {
      if (!v.is_array() || v.size() != 2) throw UsageError("config: 'bracket' must be [lo, hi]");
      c.bracket = {detail::finite_number(v[0], "bracket"), detail::finite_number(v[1], "bracket")};
    } else if (key == "format") {
      if (!v.is_string()) throw UsageError("config: 'format' must be a string");
      c.format = v.get<std::string>();
    } else if (key == "timing") {
      if (!v.is_boolean()) throw UsageError("config: 'timing' must be a boolean");
      c.timing = v.get<bool>();
    } else {
      throw UsageError("config: unknown key '" + key + "'");
    }
  }
  if (!shorthand.empty()) {
    if (!c.hinge.is_null()) throw UsageError("config: give either 'hinge' or 'a'/'b'/'gamma'");
    c.hinge = shorthand;
  }
  return c;
}

inline Json config_to_json(const ScenarioConfig& c) {
  Json j;
  j["scenario"] = c.scenario;
  j["space"] = c.space;
  j["kappa"] = c.kappa;
  j["hinge"] = c.hinge;
  j["segment"] = c.segment;
  j["probes"] = c.probes;
  j["property"] = c.property;
  j["tolerances"] = Json{{"angle", c.tol.angle}, {"distance", c.tol.distance}};
  j["grid"] = c.grid;
  j["rungs"] = c.rungs;
  j["iteration_rungs"] = c.iteration_rungs;
  j["seed"] = c.seed;
  j["n_max"] = c.n_max;
  j["max_depth"] = c.max_depth;
  j["samples"] = c.samples;
  j["probe_count"] = c.probe_count;
  j["scale"] = c.scale;
  j["bracket"] = Json::array({c.bracket[0], c.bracket[1]});
  return j;
}

inline void validate(const ScenarioConfig& c) {
  bool known = false;
  for (const auto& n : scenario_names()) known = known || n == c.scenario;
  if (!known) throw UsageError("unknown scenario '" + c.scenario + "'");
  if (c.format != "json" && c.format != "csv") throw UsageError("format must be json or csv");
  if (!(c.tol.angle >= 0.0) || !(c.tol.distance >= 0.0)) throw UsageError("tolerances must be nonnegative");
  if (c.rungs < 2 || c.iteration_rungs < 2) throw UsageError("rungs must be at least 2");
}

// --- hinges ----------------------------------------------------------------

namespace detail {

template <GeodesicSpace S>
Hinge<S> hinge_from_sides(const S& space, const typename S::Point& p, double a, double b, double gamma) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("hinge: side lengths must be positive");
  return make_hinge(space, p, space.exp(p, 0.0, b), space.exp(p, gamma, a));
}

template <GeodesicSpace S>
Hinge<S> default_hinge(const S& space) {
  return hinge_from_sides(space, space.base_point(), 1.0, 1.0, 1.0);
}

inline Hinge<Cone> across_apex(const Cone& cone) {
  const double g = std::min(0.5 * cone.total_angle(), 1.25 * std::numbers::pi);
  return make_hinge(cone, cone.point(1.0, 0.5 * g), cone.point(1.0, 0.0), cone.point(1.0, g));
}

}  // namespace detail

/// Hinge from a config value:
///   "octant"       sphere: sides pi r/2 at the north pole, right angle;
///   "across-apex"  cone: p = (1, g/2), x = (1, 0), y = (1, g) with
///                  g = min(theta/2, 5 pi/4);
///   {"a","b","gamma"}  |px| = b along heading 0 and |py| = a along heading
///                  gamma from the base point (optional "vertex");
///   {"vertex","x","y"} explicit coordinates.
template <GeodesicSpace S>
Hinge<S> hinge_from_json(const S& space, const Json& j) {
  if (j.is_null()) {
    if constexpr (std::is_same_v<S, Cone>) return detail::across_apex(space);
    if constexpr (std::is_same_v<S, Sphere>) {
      const double q = 0.5 * std::numbers::pi * space.radius();
      return detail::hinge_from_sides(space, space.base_point(), q, q, 0.5 * std::numbers::pi);
    }
    return detail::default_hinge(space);
  }
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "octant") {
      if constexpr (std::is_same_v<S, Sphere>) {
        const double q = 0.5 * std::numbers::pi * space.radius();
        return detail::hinge_from_sides(space, space.base_point(), q, q, 0.5 * std::numbers::pi);
      }
      throw UsageError("hinge preset 'octant' needs a sphere");
    }
    if (name == "across-apex") {
      if constexpr (std::is_same_v<S, Cone>) return detail::across_apex(space);
      throw UsageError("hinge preset 'across-apex' needs a cone");
    }
    throw UsageError("unknown hinge preset '" + name + "'");
  }
  if (!j.is_object()) throw UsageError("hinge must be a preset name or an object");
  if (j.contains("a") || j.contains("b") || j.contains("gamma")) {
    const auto p = j.contains("vertex") ? io::point_from_json(space, j.at("vertex")) : space.base_point();
    return detail::hinge_from_sides(space, p, io::require_number(j, "a", "hinge"), io::require_number(j, "b", "hinge"),
                                    io::require_number(j, "gamma", "hinge"));
  }
  if (!j.contains("vertex") || !j.contains("x") || !j.contains("y")) {
    throw UsageError("hinge object needs a/b/gamma or vertex/x/y");
  }
  return make_hinge(space, io::point_from_json(space, j.at("vertex")), io::point_from_json(space, j.at("x")),
                    io::point_from_json(space, j.at("y")));
}

// --- scenarios -------------------------------------------------------------

namespace detail {

struct Residual {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
};

inline Json residuals_to_json(const std::vector<Residual>& rs, int samples) {
  Json out = Json::array();
  bool all = true;
  for (const auto& r : rs) {
    out.push_back(Json{{"identity", r.name}, {"max_error", r.max_error}, {"tolerance", r.tolerance},
                       {"passed", r.max_error <= r.tolerance}});
    all = all && r.max_error <= r.tolerance;
  }
  return Json{{"samples", samples}, {"passed", all}, {"identities", out}};
}

inline io::Table residual_table(const std::vector<Residual>& rs) {
  io::Table t{"identities", {"index", "max_error", "tolerance"}, {}};
  for (std::size_t i = 0; i < rs.size(); ++i) t.rows.push_back({static_cast<double>(i), rs[i].max_error, rs[i].tolerance});
  return t;
}

// |lhs - rhs| relative to the largest term magnitude (at least 1).
inline double rel_err(double lhs, double rhs, double scale) {
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(scale));
}

inline void bump(std::vector<Residual>& rs, std::size_t i, double e) {
  if (!(e <= rs[i].max_error)) rs[i].max_error = std::isnan(e) ? std::numeric_limits<double>::infinity() : e;
}

inline Report trig_identities(const ScenarioConfig& cfg) {
  const int n = cfg.samples > 0 ? cfg.samples : 10000;
  std::vector<Residual> rs;
  for (const char* name : {"cs^2 + k sn^2 = 1", "sn(x+y) addition", "cs(x+y) addition", "sn(2x) = 2 sn cs",
                           "cs(2x) = 1 - 2k sn^2", "k sn^2(x/2) = (1 - cs)/2", "cs^2(x/2) = (1 + cs)/2",
                           "cs + k md = 1", "md(x+y) = md(x-y) + 2 sn sn", "md(x+y) = md(x) + cs(x) md(y) + sn sn",
                           "md(2x) = 2 sn^2 = 2 (1 + cs) md"}) {
    rs.push_back({name, 0.0, 1e-12});
  }
  Rng rng(cfg.seed);
  for (int i = 0; i < n; ++i) {
    double kappa = rng.uniform(-2.0, 2.0);
    if (i % 5 == 0) kappa = rng.uniform(-1e-7, 1e-7);
    const Curvature k{kappa};
    const double x = rng.uniform(-3.0, 3.0);
    const double y = rng.uniform(-3.0, 3.0);
    const double sx = sn(k, x), cx = cs(k, x), sy = sn(k, y), cy = cs(k, y);
    bump(rs, 0, rel_err(cx * cx + kappa * sx * sx, 1.0, cx * cx + std::abs(kappa) * sx * sx));
    bump(rs, 1, rel_err(sn(k, x + y), sx * cy + cx * sy, std::abs(sx * cy) + std::abs(cx * sy)));
    bump(rs, 2, rel_err(cs(k, x + y), cx * cy - kappa * sx * sy, std::abs(cx * cy) + std::abs(kappa * sx * sy)));
    bump(rs, 3, rel_err(sn(k, 2 * x), 2 * sx * cx, 2 * std::abs(sx * cx)));
    bump(rs, 4, rel_err(cs(k, 2 * x), 1.0 - 2 * kappa * sx * sx, 1.0 + 2 * std::abs(kappa) * sx * sx));
    const double sh = sn(k, 0.5 * x), ch = cs(k, 0.5 * x);
    bump(rs, 5, rel_err(kappa * sh * sh, 0.5 * (1.0 - cx), 1.0 + std::abs(cx)));
    bump(rs, 6, rel_err(ch * ch, 0.5 * (1.0 + cx), 1.0 + std::abs(cx)));
    const double ax = std::abs(x), ay = std::abs(y);
    const double mx = md(k, ax), my = md(k, ay);
    bump(rs, 7, rel_err(cs(k, ax) + kappa * mx, 1.0, std::abs(cs(k, ax)) + std::abs(kappa * mx)));
    const double sax = sn(k, ax), say = sn(k, ay);
    bump(rs, 8, rel_err(md(k, ax + ay), md(k, std::abs(ax - ay)) + 2 * sax * say, md(k, ax + ay)));
    bump(rs, 9, rel_err(md(k, ax + ay), mx + cs(k, ax) * my + sax * say,
                        mx + std::abs(cs(k, ax) * my) + std::abs(sax * say)));
    bump(rs, 10, std::max(rel_err(md(k, 2 * ax), 2 * sax * sax, 2 * sax * sax),
                          rel_err(md(k, 2 * ax), 2 * (1.0 + cs(k, ax)) * mx, 2 * (1.0 + std::abs(cs(k, ax))) * mx)));
  }
  Report r;
  r.result = residuals_to_json(rs, n);
  r.tables.push_back(residual_table(rs));
  return r;
}

inline Report triangle_solvers(const ScenarioConfig& cfg) {
  const int n = cfg.samples > 0 ? cfg.samples : 10000;
  std::vector<Residual> rs{{"SAS -> SSS angle round trip", 0.0, 1e-9},
                           {"law of cosines, md forms", 0.0, 1e-10},
                           {"dual law of cosines", 0.0, 1e-9},
                           {"law of sines", 0.0, 1e-9},
                           {"midpoint formula", 0.0, 1e-9}};
  Rng rng(cfg.seed);
  for (double kappa : {-1.0, 0.0, 1.0}) {
    const Curvature k{kappa};
    const double top = kappa > 0.0 ? std::numbers::pi : 3.0;
    for (int i = 0; i < n; ++i) {
      const double a = rng.uniform(0.05, 0.95) * top;
      const double b = rng.uniform(0.05, 0.95) * top;
      const double gamma = rng.uniform(0.01, std::numbers::pi - 0.01);
      const double c = side_from_sas(k, {b, a, gamma});
      bump(rs, 0, std::abs(angle_from_sss(k, {a, b, c}) - gamma));
      const double sab = sn(k, a) * sn(k, b);
      const double mc = md(k, c);
      const double forms[4] = {md(k, a + b) - sab * (1 + std::cos(gamma)), md(k, std::abs(a - b)) + sab * (1 - std::cos(gamma)),
                               md(k, a) + cs(k, a) * md(k, b) - sab * std::cos(gamma),
                               md(k, a) * cs(k, b) + md(k, b) - sab * std::cos(gamma)};
      for (double f : forms) bump(rs, 1, rel_err(mc, f, md(k, a) + md(k, b) + std::abs(sab)));
      if (!(c > 1e-3)) continue;
      const double alpha = angle_from_sss(k, {b, c, a});  // at the vertex opposite a
      const double beta = angle_from_sss(k, {a, c, b});
      bump(rs, 2, std::abs(std::cos(gamma) - (std::sin(alpha) * std::sin(beta) * cs(k, c) - std::cos(alpha) * std::cos(beta))));
      bump(rs, 3, std::abs(sn(k, a) * std::sin(beta) - sn(k, b) * std::sin(alpha)));
      if (cs(k, 0.5 * c) > 0.1) {
        // Median from the law of cosines in the half triangle.
        const double l = side_from_sas(k, {b, 0.5 * c, alpha});
        bump(rs, 4, std::abs(midpoint_distance(k, {a, b, c}) - l));
      }
    }
  }
  Report r;
  r.result = residuals_to_json(rs, 3 * n);
  r.tables.push_back(residual_table(rs));
  return r;
}

// Points of M^2_k for the lemma scenario: distances of the unit model space
// rescaled by 1/sqrt|k|.
struct ModelSampler {
  Curvature k;
  Rng rng;

  std::array<double, 5> draw() {
    const double kappa = k.value();
    const double unit = kappa == 0.0 ? 1.0 : 1.0 / std::sqrt(std::abs(kappa));
    for (;;) {
      auto pick = [&](auto& space) {
        const auto base = space.base_point();
        const double reach = kappa > 0.0 ? 0.6 : 1.5;
        const auto p = space.sample_near(base, reach, rng);
        const auto q = space.sample_near(base, reach, rng);
        const auto x = space.sample_near(base, reach, rng);
        const auto y = space.sample_near(base, reach, rng);
        return std::array<double, 5>{space.distance(p, q), space.distance(q, x), space.distance(q, y),
                                     space.distance(p, y), space.distance(x, y)};
      };
      std::array<double, 5> d;
      if (kappa > 0.0) {
        Sphere s(1.0);
        d = pick(s);
      } else if (kappa < 0.0) {
        Hyperbolic h;
        d = pick(h);
      } else {
        Plane pl;
        d = pick(pl);
      }
      for (double& v : d) v *= unit;
      const ModelDiameter diam = model_diameter(k);
      if (std::min({d[0], d[1], d[2], d[3]}) < 1e-3 * unit) continue;
      if (!diam.exceeds(d[3]) || !diam.exceeds(d[2]) || !diam.exceeds(d[0] + d[1])) continue;
      // The straightened triangle needs |pq| + |qx| <= |py| + |xy|.
      if (d[0] + d[1] > d[3] + d[4]) continue;
      if (!triple_exists(k, d[0] + d[1], d[3], d[4])) continue;
      return d;
    }
  }
};

inline Report alexandrov_lemma(const ScenarioConfig& cfg) {
  const int n = cfg.samples > 0 ? cfg.samples : 10000;
  const Curvature k{cfg.kappa};
  ModelSampler sampler{k, Rng(cfg.seed)};
  int agree = 0;
  double worst = 0.0;  // most negative product of the two outputs
  for (int i = 0; i < n; ++i) {
    const auto d = sampler.draw();
    const AlexandrovComparison r = alexandrov_compare(k, {d[0], d[1], d[2], d[3], d[4]});
    if (signs_agree(r)) ++agree;
    worst = std::min(worst, r.defect_at_q * r.angle_gap_at_p);
  }
  Report rep;
  rep.result = Json{{"samples", n}, {"sign_agreements", agree}, {"passed", agree == n}, {"min_product", worst}};
  rep.tables.push_back(io::Table{"lemma", {"samples", "sign_agreements", "min_product"},
                                 {{static_cast<double>(n), static_cast<double>(agree), worst}}});
  return rep;
}

inline CheckOptions check_options(const ScenarioConfig& cfg) {
  CheckOptions o;
  o.grid = cfg.grid;
  o.tol = cfg.tol;
  o.ladder.rungs = cfg.rungs;
  return o;
}

inline GlobalizeOptions globalize_options(const ScenarioConfig& cfg) {
  GlobalizeOptions o;
  o.tol = cfg.tol;
  o.ladder.rungs = cfg.rungs;
  o.iteration.n_max = cfg.n_max;
  o.iteration.ladder.rungs = cfg.iteration_rungs;
  return o;
}

template <GeodesicSpace S>
Report property_check(const S& space, const ScenarioConfig& cfg) {
  const Hinge<S> h = hinge_from_json(space, cfg.hinge);
  const Property prop = parse_property(cfg.property);
  if (prop == Property::kBalanced) throw UsageError("use the balanced-check scenario for balancedness");
  const Verdict v = check_property(prop, Curvature{cfg.kappa}, h, check_options(cfg));
  Report r;
  r.result = Json{{"hinge", io::hinge_to_json(h)}, {"verdict", io::verdict_to_json(v)}};
  r.tables.push_back(io::verdict_table({v}));
  return r;
}

template <GeodesicSpace S>
std::pair<typename S::Point, typename S::Point> default_segment(const S& space) {
  if constexpr (std::is_same_v<S, Cone>) {
    return {space.point(1.0, 0.0), space.point(1.0, std::min(std::numbers::pi, 0.5 * space.total_angle()))};
  } else {
    double len = 1.0;
    if constexpr (std::is_same_v<S, Sphere>) len = space.radius();
    const auto p = space.base_point();
    return {p, space.exp(p, 0.0, len)};
  }
}

template <GeodesicSpace S>
Report balanced_check(const S& space, const ScenarioConfig& cfg) {
  typename S::Point from, to;
  if (cfg.segment.is_null()) {
    std::tie(from, to) = default_segment(space);
  } else {
    if (!cfg.segment.is_object() || !cfg.segment.contains("from") || !cfg.segment.contains("to")) {
      throw UsageError("segment must be {\"from\": point, \"to\": point}");
    }
    from = io::point_from_json(space, cfg.segment.at("from"));
    to = io::point_from_json(space, cfg.segment.at("to"));
  }
  const Segment<S> seg = space.segment(from, to);
  std::vector<BalanceProbe<S>> probes;
  if (cfg.probes.is_null()) {
    // Interior points at i/(n+1) of the length with a random probe direction.
    Rng rng(cfg.seed);
    for (int i = 0; i < cfg.probe_count; ++i) {
      const double t = seg.length() * static_cast<double>(i + 1) / (cfg.probe_count + 1);
      const auto q = seg.point_at(t);
      probes.push_back({t, space.exp(q, rng.uniform(0.0, 2.0 * std::numbers::pi), 0.5 * seg.length())});
    }
  } else {
    if (!cfg.probes.is_array()) throw UsageError("probes must be a list of {\"q\", \"y\"}");
    for (const auto& pj : cfg.probes) {
      if (!pj.is_object() || !pj.contains("q") || !pj.contains("y")) throw UsageError("probe needs q and y");
      probes.push_back({finite_number(pj.at("q"), "probes.q"), io::point_from_json(space, pj.at("y"))});
    }
  }
  const Verdict v = check_balanced(space, seg, probes, check_options(cfg));
  Report r;
  r.result = Json{{"segment", Json{{"from", io::point_to_json(from)}, {"to", io::point_to_json(to)},
                                   {"length", seg.length()}}},
                  {"probes", static_cast<int>(probes.size())},
                  {"verdict", io::verdict_to_json(v)}};
  r.tables.push_back(io::verdict_table({v}));
  return r;
}

template <GeodesicSpace S>
Report curvature_estimate(const S& space, const ScenarioConfig& cfg) {
  CurvatureEstimateOptions o;
  o.seed = cfg.seed;
  o.check = check_options(cfg);
  if (cfg.samples > 0) o.samples = cfg.samples;
  const CurvatureEstimate e =
      estimate_curvature_floor(space, space.base_point(), cfg.scale, {cfg.bracket[0], cfg.bracket[1]}, o);
  Report r;
  r.result = Json{{"kappa", e.kappa.value()}, {"lower", e.lower}, {"upper", e.upper}, {"evaluations", e.evaluations},
                  {"samples", o.samples}};
  r.tables.push_back(io::Table{"estimate", {"kappa", "lower", "upper", "evaluations"},
                               {{e.kappa.value(), e.lower, e.upper, static_cast<double>(e.evaluations)}}});
  return r;
}

template <GeodesicSpace S>
Report thin_iteration(const S& space, const ScenarioConfig& cfg) {
  const Json hj = cfg.hinge.is_null() ? Json{{"a", 5.0}, {"b", 0.9}, {"gamma", 0.5 * std::numbers::pi}} : cfg.hinge;
  const Hinge<S> h = hinge_from_json(space, hj);
  IterationOptions o;
  o.n_max = cfg.n_max;
  o.ladder.rungs = cfg.iteration_rungs;
  const IterationTrace t = thin_hinge_iteration(Curvature{cfg.kappa}, h, o);
  const IterationStep& last = t.steps.back();
  Report r;
  r.result = Json{{"hinge", io::hinge_to_json(h)},
                  {"trace", io::trace_to_json(t)},
                  {"final_gap", last.l - last.comparison_chord},
                  {"steps", static_cast<int>(t.steps.size())}};
  r.tables.push_back(io::trace_table(t));
  return r;
}

template <GeodesicSpace S>
Report globalize(const S& space, const ScenarioConfig& cfg) {
  const Hinge<S> h = hinge_from_json(space, cfg.hinge);
  const GlobalizeResult<S> g = globalize_check(Curvature{cfg.kappa}, h, globalize_options(cfg));
  Json levels = Json::array();
  for (const auto& lv : g.levels) levels.push_back(io::subdivision_to_json(lv));
  Json pieces = Json::array();
  for (const auto& t : g.thin_traces) {
    const IterationStep& last = t.steps.back();
    pieces.push_back(Json{{"a_0", t.a0}, {"b_0", t.b0}, {"steps", static_cast<int>(t.steps.size())},
                          {"final_gap", last.l - last.comparison_chord}});
  }
  Report r;
  r.result = Json{{"hinge", io::hinge_to_json(h)},
                  {"verdict", io::verdict_to_json(g.verdict)},
                  {"direct", io::verdict_to_json(g.direct)},
                  {"agree", g.verdict.passed == g.direct.passed},
                  {"levels", levels},
                  {"pieces", pieces}};
  r.tables.push_back(io::verdict_table({g.verdict, g.direct}));
  io::Table lt{"levels", {"q", "margin_p_qy", "margin_q_py", "margin_q_xy", "balance_defect", "margin_hinge"}, {}};
  for (const auto& lv : g.levels) {
    lt.rows.push_back({lv.q, lv.margin_p_qy, lv.margin_q_py, lv.margin_q_xy, lv.balance_defect, lv.margin_hinge});
  }
  r.tables.push_back(lt);
  return r;
}

template <GeodesicSpace S>
Report defect_descent(const S& space, const ScenarioConfig& cfg) {
  const Hinge<S> h = hinge_from_json(space, cfg.hinge);
  DescentOptions o;
  o.max_depth = cfg.max_depth;
  o.globalize = globalize_options(cfg);
  const DescentTrace<S> t = toponogov::defect_descent(Curvature{cfg.kappa}, h, o);
  const auto base = space.base_point();
  Json levels = Json::array();
  io::Table tab{"descent", {"n", "perimeter", "margin", "vertex_to_base"}, {}};
  for (std::size_t i = 0; i < t.hinges.size(); ++i) {
    const auto& lv = t.hinges[i];
    const double to_base = space.distance(lv.hinge.vertex(), base);
    Json lj = io::hinge_to_json(lv.hinge);
    lj["n"] = static_cast<int>(i);
    lj["perimeter"] = lv.perimeter;
    lj["margin"] = lv.margin;
    lj["vertex_to_base"] = to_base;
    levels.push_back(lj);
    tab.rows.push_back({static_cast<double>(i), lv.perimeter, lv.margin, to_base});
  }
  Report r;
  r.result = Json{{"hinges", levels},
                  {"limit_point_estimate", io::point_to_json(t.limit_point_estimate)},
                  {"limit_to_base", space.distance(t.limit_point_estimate, base)},
                  {"stop_reason", t.stop_reason}};
  r.tables.push_back(tab);
  return r;
}

}  // namespace detail

/// Runs one scenario. Failing checks are results, not errors.
inline Report run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  const std::string& s = cfg.scenario;
  if (s == "trig-identities") {
    r = detail::trig_identities(cfg);
  } else if (s == "triangle-solvers") {
    r = detail::triangle_solvers(cfg);
  } else if (s == "alexandrov-lemma") {
    r = detail::alexandrov_lemma(cfg);
  } else {
    io::AnySpace space;
    try {
      space = io::space_from_json(cfg.space);
    } catch (const DomainError& e) {
      throw UsageError(e.what());  // a bad space descriptor is a bad config
    }
    r = std::visit(
        [&](const auto& sp) -> Report {
          if (s == "property-check") return detail::property_check(sp, cfg);
          if (s == "balanced-check") return detail::balanced_check(sp, cfg);
          if (s == "curvature-estimate") return detail::curvature_estimate(sp, cfg);
          if (s == "thin-iteration") return detail::thin_iteration(sp, cfg);
          if (s == "globalize") return detail::globalize(sp, cfg);
          return detail::defect_descent(sp, cfg);
        },
        space);
  }
  r.config = config_to_json(cfg);
  if (cfg.timing) {
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return r;
}

inline Json report_to_json(const Report& r) {
  Json j;
  j["artifact"] = kArtifact;
  j["version"] = kVersion;
  j["config"] = r.config;
  j["result"] = r.result;
  if (r.wall_time) j["wall_time_s"] = *r.wall_time;
  return j;
}

/// Writes the report. JSON goes to `destination` (standard output when
/// empty). CSV writes the first table to `destination` and every further
/// table to "<stem>.<table name><ext>" next to it; on standard output the
/// tables are separated by a blank line.
inline void emit_report(const Report& r, const std::string& format, const std::string& destination = "") {
  if (format != "json" && format != "csv") throw UsageError("format must be json or csv");
  auto open = [](const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    return f;
  };
  auto check = [](std::ostream& os, const std::string& what) {
    os.flush();
    if (!os) throw IoError("write to " + what + " failed");
  };
  if (format == "json") {
    std::ostringstream ss;
    io::write_json(ss, report_to_json(r));
    ss << '\n';
    if (destination.empty()) {
      std::cout << ss.str();
      check(std::cout, "standard output");
    } else {
      auto f = open(destination);
      f << ss.str();
      check(f, destination);
    }
    return;
  }
  if (destination.empty()) {
    for (std::size_t i = 0; i < r.tables.size(); ++i) {
      if (i) std::cout << '\n';
      io::write_csv(std::cout, r.tables[i]);
    }
    check(std::cout, "standard output");
    return;
  }
  const std::filesystem::path base(destination);
  for (std::size_t i = 0; i < r.tables.size(); ++i) {
    std::filesystem::path path = base;
    if (i) path = base.parent_path() / (base.stem().string() + "." + r.tables[i].name + base.extension().string());
    auto f = open(path);
    io::write_csv(f, r.tables[i]);
    check(f, path.string());
  }
}

}  // namespace toponogov::cli
