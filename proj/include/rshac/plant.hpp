// Copyright 2026 The rshac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Cart-pole with the cart acceleration as input (the cart's own dynamics are
// cancelled by partial feedback linearization). State ordering is
// [x, x_dot, q, q_dot] with q measured from the upright position.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rshac {

enum StateIndex : int { kX = 0, kXDot = 1, kQ = 2, kQDot = 3 };

template <typename Scalar>
using StateVector = Eigen::Matrix<Scalar, 4, 1>;

using PlantState = StateVector<double>;

inline PlantState make_state(double x, double x_dot, double q, double q_dot) {
  return PlantState(x, x_dot, q, q_dot);
}

/// Physical parameters of the pendulum plus the sampling time.
template <typename Scalar>
struct CartPoleParams {
  Scalar m;   // pendulum mass [kg]
  Scalar L;   // pivot to centre of gravity [m]
  Scalar I;   // inertia about the centre of gravity [kg m^2]
  Scalar g;   // gravity [m/s^2]
  Scalar k;   // joint damping [N s/rad]
  Scalar ts;  // sampling time [s]

  /// Values measured on the reference rig.
  static CartPoleParams measured() {
    return {Scalar(0.116527), Scalar(0.15), Scalar(8.7395e-4),
            Scalar(9.80665),  Scalar(0.000161), Scalar(0.001)};
  }

  /// Inertia about the pivot, I + m L^2.
  Scalar pivot_inertia() const { return I + m * L * L; }

  void validate() const {
    const auto positive = [](Scalar v, const char* name) {
      if (!(v > Scalar(0)) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("cart-pole parameter ") + name +
                                    " must be finite and > 0");
      }
    };
    positive(m, "m");
    positive(L, "L");
    positive(I, "I");
    positive(g, "g");
    positive(ts, "ts");
    if (!(k >= Scalar(0)) || !std::isfinite(k)) {
      throw std::invalid_argument("cart-pole parameter k must be finite and >= 0");
    }
  }
};

/// State-space model x' = A x + B u (continuous) or x+ = A x + B u (discrete).
template <typename Scalar>
struct LinearModel {
  Eigen::Matrix<Scalar, 4, 4> A;
  Eigen::Matrix<Scalar, 4, 1> B;
  bool discrete = false;
};

template <typename Scalar>
StateVector<Scalar> nonlinear_derivative(const StateVector<Scalar>& s, Scalar u,
                                         const CartPoleParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar q = s(kQ);
  const Scalar q_dot = s(kQDot);
  const Scalar q_ddot =
      (p.m * p.g * p.L * sin(q) - p.m * p.L * cos(q) * u - p.k * q_dot) / p.pivot_inertia();
  return StateVector<Scalar>(s(kXDot), u, q_dot, q_ddot);
}

/// Jacobians of nonlinear_derivative at the upright fixed point.
template <typename Scalar>
LinearModel<Scalar> linearize(const CartPoleParams<Scalar>& p) {
  const Scalar J = p.pivot_inertia();
  LinearModel<Scalar> model;
  model.A.setZero();
  model.A(kX, kXDot) = Scalar(1);
  model.A(kQ, kQDot) = Scalar(1);
  model.A(kQDot, kQ) = p.m * p.g * p.L / J;
  model.A(kQDot, kQDot) = -p.k / J;
  model.B << Scalar(0), Scalar(1), Scalar(0), -p.m * p.L / J;
  model.discrete = false;
  return model;
}

/// Forward-Euler discretization: A_d = I + A ts, B_d = B ts.
template <typename Scalar>
LinearModel<Scalar> discretize(const LinearModel<Scalar>& continuous, Scalar ts) {
  if (continuous.discrete) {
    throw std::invalid_argument("discretize: model is already discrete");
  }
  if (!(ts > Scalar(0))) {
    throw std::invalid_argument("discretize: sampling time must be > 0");
  }
  LinearModel<Scalar> model;
  model.A = Eigen::Matrix<Scalar, 4, 4>::Identity() + continuous.A * ts;
  model.B = continuous.B * ts;
  model.discrete = true;
  return model;
}

enum class Integrator { kEuler, kRk4 };

/// Raised when the plant state stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Advances the nonlinear dynamics by p.ts with u held constant.
template <typename Scalar>
StateVector<Scalar> integrate_step(const StateVector<Scalar>& s, Scalar u,
                                   const CartPoleParams<Scalar>& p, Integrator method) {
  const Scalar h = p.ts;
  StateVector<Scalar> next;
  if (method == Integrator::kEuler) {
    next = s + h * nonlinear_derivative(s, u, p);
  } else {
    const StateVector<Scalar> k1 = nonlinear_derivative(s, u, p);
    const StateVector<Scalar> k2 = nonlinear_derivative<Scalar>(s + (h / 2) * k1, u, p);
    const StateVector<Scalar> k3 = nonlinear_derivative<Scalar>(s + (h / 2) * k2, u, p);
    const StateVector<Scalar> k4 = nonlinear_derivative<Scalar>(s + h * k3, u, p);
    next = s + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  if (!next.allFinite()) {
    throw DivergenceError("integrate_step: plant state is no longer finite");
  }
  return next;
}

using Params = CartPoleParams<double>;
using Model = LinearModel<double>;

}  // namespace rshac
