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
 * @file io.hpp
 * @brief JSON and CSV serialization of spaces, points, verdicts and traces.
 *
 * JSON values are built with nlohmann::json but written by write_json below
 * so that every floating point number carries 17 significant digits.
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "toponogov/comparison.hpp"
#include "toponogov/errors.hpp"
#include "toponogov/globalization.hpp"
#include "toponogov/spaces.hpp"

namespace toponogov::io {

using Json = nlohmann::ordered_json;

using AnySpace = std::variant<Plane, Sphere, Hyperbolic, Cone>;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_string(std::ostream& os, const std::string& s) {
  // nlohmann escapes strings the same way for every indentation.
  os << Json(s).dump();
}

inline void write_value(std::ostream& os, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        write_string(os, it.key());
        os << (indent < 0 ? ":" : ": ");
        write_value(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        write_value(os, v, indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        os << format_double(v);
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// JSON text with 17 significant digits for every double; non-finite
/// numbers become null. indent < 0 writes a single line.
inline void write_json(std::ostream& os, const Json& j, int indent = 2) { detail::write_value(os, j, indent, 0); }

inline Json number_or_null(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

// --- spaces and points -----------------------------------------------------

inline double require_number(const Json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw DomainError(std::string(what) + ": missing numeric field '" + key + "'");
  }
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": field '" + key + "' must be finite");
  return v;
}

inline AnySpace space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space") || !j.at("space").is_string()) {
    throw DomainError("space descriptor must be an object with a \"space\" field");
  }
  const std::string name = j.at("space").get<std::string>();
  if (name == "plane") return Plane{};
  if (name == "sphere") return Sphere(j.contains("radius") ? require_number(j, "radius", "sphere") : 1.0);
  if (name == "hyperbolic") return Hyperbolic{};
  if (name == "cone") return Cone(require_number(j, "total_angle", "cone"));
  throw DomainError("unknown space '" + name + "'");
}

inline Json space_to_json(const AnySpace& s) {
  return std::visit(
      [](const auto& sp) -> Json {
        using T = std::decay_t<decltype(sp)>;
        Json j;
        j["space"] = T::kName;
        if constexpr (std::is_same_v<T, Sphere>) j["radius"] = sp.radius();
        if constexpr (std::is_same_v<T, Cone>) j["total_angle"] = sp.total_angle();
        return j;
      },
      s);
}

inline Json point_to_json(const Plane::Point& p) { return Json::array({p.x(), p.y()}); }
inline Json point_to_json(const Eigen::Vector3d& p) { return Json::array({p.x(), p.y(), p.z()}); }
inline Json point_to_json(const ConePoint& p) { return Json::array({p.r, p.phi}); }

inline std::vector<double> coordinates(const Json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw DomainError(std::string(what) + ": point must be an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> c;
  for (const auto& v : j) {
    if (!v.is_number()) throw DomainError(std::string(what) + ": coordinates must be numbers");
    c.push_back(v.get<double>());
  }
  return c;
}

inline Plane::Point point_from_json(const Plane& s, const Json& j) {
  const auto c = coordinates(j, 2, "plane");
  Plane::Point p(c[0], c[1]);
  s.validate(p);
  return p;
}

inline Sphere::Point point_from_json(const Sphere& s, const Json& j) {
  const auto c = coordinates(j, 3, "sphere");
  Sphere::Point p(c[0], c[1], c[2]);
  s.validate(p);
  return p;
}

inline Hyperbolic::Point point_from_json(const Hyperbolic& s, const Json& j) {
  const auto c = coordinates(j, 3, "hyperbolic");
  Hyperbolic::Point p(c[0], c[1], c[2]);
  s.validate(p);
  return p;
}

inline Cone::Point point_from_json(const Cone& s, const Json& j) {
  const auto c = coordinates(j, 2, "cone");
  return s.point(c[0], c[1]);
}

// --- results ---------------------------------------------------------------

inline Json verdict_to_json(const Verdict& v) {
  Json j;
  j["property"] = property_name(v.property);
  j["passed"] = v.passed;
  j["kappa"] = v.kappa.value();
  j["worst_margin"] = v.worst_margin;
  j["tolerance"] = v.tolerance;
  Json w = Json::object();
  for (const auto& [k, val] : v.witness) w[k] = val;
  j["witness"] = w;
  return j;
}

inline Json step_to_json(const IterationStep& s) {
  Json j;
  j["n"] = s.n;
  j["l_n"] = s.l;
  j["comparison_chord_n"] = s.comparison_chord;
  j["gamma_n"] = s.gamma;
  j["gamma_bar_n"] = s.gamma_bar;
  j["omega_bar_n"] = number_or_null(s.omega_bar);
  j["side_y_n"] = s.side_y;
  j["aux_perimeter"] = number_or_null(s.aux_perimeter);
  j["aux_margin_prev"] = number_or_null(s.aux_margin_prev);
  j["aux_margin_next"] = number_or_null(s.aux_margin_next);
  return j;
}

inline Json trace_to_json(const IterationTrace& t) {
  Json j;
  j["a_0"] = t.a0;
  j["b_0"] = t.b0;
  j["b_prime"] = t.b_prime;
  j["chord_0"] = t.chord0;
  Json steps = Json::array();
  for (const auto& s : t.steps) steps.push_back(step_to_json(s));
  j["steps"] = steps;
  return j;
}

inline Json subdivision_to_json(const SubdivisionRecord& r) {
  Json j;
  j["q"] = r.q;
  j["margin_p_qy"] = r.margin_p_qy;
  j["margin_q_py"] = r.margin_q_py;
  j["margin_q_xy"] = r.margin_q_xy;
  j["balance_defect"] = r.balance_defect;
  j["margin_hinge"] = r.margin_hinge;
  j["hypotheses_hold"] = r.hypotheses_hold;
  j["implication_holds"] = r.implication_holds;
  return j;
}

template <GeodesicSpace S>
Json hinge_to_json(const Hinge<S>& h) {
  Json j;
  j["vertex"] = point_to_json(h.vertex());
  j["x"] = point_to_json(h.x());
  j["y"] = point_to_json(h.y());
  j["side_x"] = h.side_x().length();
  j["side_y"] = h.side_y().length();
  j["opposite"] = h.opposite();
  return j;
}

// --- CSV -------------------------------------------------------------------

/// A CSV table; empty optionals are written as empty fields.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (row[i]) os << format_double(*row[i]);
    }
    os << '\n';
  }
}

inline Table trace_table(const IterationTrace& t, std::string name = "trace") {
  Table tab{std::move(name), {"n", "l_n", "comparison_chord_n", "gamma_n", "gamma_bar_n", "omega_bar_n"}, {}};
  for (const auto& s : t.steps) {
    tab.rows.push_back({static_cast<double>(s.n), s.l, s.comparison_chord, s.gamma, s.gamma_bar, s.omega_bar});
  }
  return tab;
}

inline Table verdict_table(const std::vector<Verdict>& vs, std::string name = "verdicts") {
  Table tab{std::move(name), {"kappa", "passed", "worst_margin", "tolerance"}, {}};
  for (const auto& v : vs) tab.rows.push_back({v.kappa.value(), v.passed ? 1.0 : 0.0, v.worst_margin, v.tolerance});
  return tab;
}

}  // namespace toponogov::io
