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
 * @file trig.hpp
 * @brief Generalized sine, cosine and modified distance of the model planes.
 *
 * For a curvature k the functions sn_k and cs_k solve f'' + k f = 0 with
 * sn(0) = 0, sn'(0) = 1 and cs(0) = 1, cs'(0) = 0. They reduce to sin/cos,
 * the identity/1, or sinh/cosh (suitably rescaled) depending on the sign of
 * k. Near k x^2 = 0 a truncated power series is used so that the functions
 * are jointly continuous in (k, x) and exact in the flat limit.
 */
#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "toponogov/errors.hpp"

namespace toponogov {

/// Curvature of a model plane, in 1/length^2. Any finite value is admitted.
class Curvature {
 public:
  constexpr Curvature() = default;
  constexpr explicit Curvature(double kappa) : kappa_(kappa) {}

  constexpr double value() const { return kappa_; }
  constexpr bool positive() const { return kappa_ > 0.0; }

  friend constexpr bool operator==(Curvature, Curvature) = default;

 private:
  double kappa_ = 0.0;
};

/// Diameter of the model plane: pi/sqrt(k) for k > 0, unbounded otherwise.
/// The unbounded case is a flag, never an infinity that leaks into arithmetic.
class ModelDiameter {
 public:
  static constexpr ModelDiameter unbounded() { return ModelDiameter{}; }
  static constexpr ModelDiameter bounded(double d) { return ModelDiameter{d}; }

  constexpr bool is_bounded() const { return bounded_; }

  /// Only meaningful when is_bounded().
  constexpr double value() const { return value_; }

  /// True if `length` is strictly below the diameter.
  constexpr bool exceeds(double length) const { return !bounded_ || length < value_; }

  /// Twice the diameter bound for perimeters: true if per <= 2D (or D unbounded).
  constexpr bool admits_perimeter(double per) const { return !bounded_ || per <= 2.0 * value_; }

  /// Strict variant, used where the hypothesis reads per < 2D.
  constexpr bool admits_perimeter_strict(double per) const {
    return !bounded_ || per < 2.0 * value_;
  }

  /// D - x, or +inf if unbounded. Only for use in min() style bounds.
  constexpr double headroom(double x) const {
    return bounded_ ? value_ - x : std::numeric_limits<double>::infinity();
  }

 private:
  constexpr ModelDiameter() = default;
  constexpr explicit ModelDiameter(double d) : bounded_(true), value_(d) {}

  bool bounded_ = false;
  double value_ = 0.0;
};

namespace detail {

// Switch to the power series below this value of |k| x^2.
inline constexpr double kSeriesThreshold = 1e-8;
inline constexpr int kSeriesTerms = 8;

// sum_{n<8} (-k)^n x^(2n+1) / (2n+1)!, evaluated in Horner form.
inline double sn_series(double kappa, double x) {
  const double z = -kappa * x * x;
  double acc = 1.0;
  for (int n = kSeriesTerms - 1; n >= 1; --n) {
    acc = 1.0 + acc * z / static_cast<double>((2 * n) * (2 * n + 1));
  }
  return x * acc;
}

inline double cs_series(double kappa, double x) {
  const double z = -kappa * x * x;
  double acc = 1.0;
  for (int n = kSeriesTerms - 1; n >= 1; --n) {
    acc = 1.0 + acc * z / static_cast<double>((2 * n - 1) * (2 * n));
  }
  return acc;
}

inline bool use_series(double kappa, double x) {
  return std::abs(kappa) * x * x < kSeriesThreshold;
}

}  // namespace detail

inline double sn(Curvature k, double x) {
  const double kappa = k.value();
  if (detail::use_series(kappa, x)) return detail::sn_series(kappa, x);
  if (kappa > 0.0) {
    const double r = std::sqrt(kappa);
    return std::sin(r * x) / r;
  }
  const double r = std::sqrt(-kappa);
  return std::sinh(r * x) / r;
}

inline double cs(Curvature k, double x) {
  const double kappa = k.value();
  if (detail::use_series(kappa, x)) return detail::cs_series(kappa, x);
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * x);
  return std::cosh(std::sqrt(-kappa) * x);
}

/// Modified distance md_k(x) = integral of sn_k over [0, x] = 2 sn_k(x/2)^2.
inline double md(Curvature k, double x) {
  if (!(x >= 0.0)) throw DomainError("md: argument must be nonnegative");
  const double s = sn(k, 0.5 * x);
  return 2.0 * s * s;
}

inline ModelDiameter model_diameter(Curvature k) {
  if (k.value() > 0.0) return ModelDiameter::bounded(std::numbers::pi / std::sqrt(k.value()));
  return ModelDiameter::unbounded();
}

/// Inverse of sn_k on [0, D_k/2] for s >= 0. For k > 0 values beyond
/// 1/sqrt(k) (reachable only through rounding) saturate at D_k/2.
inline double asn(Curvature k, double s) {
  const double kappa = k.value();
  if (kappa == 0.0) return s;
  if (kappa > 0.0) {
    const double r = std::sqrt(kappa);
    const double t = r * s;
    return std::asin(t >= 1.0 ? 1.0 : t) / r;
  }
  const double r = std::sqrt(-kappa);
  return std::asinh(r * s) / r;
}

}  // namespace toponogov
