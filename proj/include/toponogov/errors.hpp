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

#pragma once

#include <stdexcept>
#include <string>

namespace toponogov {

/// Input outside the domain of an operation (negative length, side beyond
/// the model diameter, triangle inequality violated, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Input that is admissible in principle but numerically contradictory,
/// e.g. a squared sine that would need clamping by more than the tolerance.
struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// No canonical segment exists (antipodal points on a sphere).
struct AmbiguityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The curvature bisection could not be started from the given bracket.
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation was invoked on an input that does not satisfy its entry
/// condition (e.g. a defect descent from a hinge that passes).
struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace toponogov
