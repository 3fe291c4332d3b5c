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

#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Cholesky>

namespace rshac {

template <typename Scalar, int States>
struct DareSolution {
  Eigen::Matrix<Scalar, States, States> P;
  std::int64_t iterations = 0;
};

/// One step of the Riccati recursion
///   P <- A'PA - A'PB (R + B'PB)^-1 B'PA + Q.
template <typename Scalar, int States, int Inputs>
Eigen::Matrix<Scalar, States, States> riccati_step(
    const Eigen::Matrix<Scalar, States, States>& P,
    const Eigen::Matrix<Scalar, States, States>& A,
    const Eigen::Matrix<Scalar, States, Inputs>& B,
    const Eigen::Matrix<Scalar, States, States>& Q,
    const Eigen::Matrix<Scalar, Inputs, Inputs>& R) {
  const Eigen::Matrix<Scalar, Inputs, States> BtPA = B.transpose() * P * A;
  const Eigen::Matrix<Scalar, Inputs, Inputs> S = R + B.transpose() * P * B;
  Eigen::Matrix<Scalar, States, States> next =
      A.transpose() * P * A - BtPA.transpose() * S.ldlt().solve(BtPA) + Q;
  // Keep the iterate exactly symmetric.
  return (next + next.transpose()) / Scalar(2);
}

/// Solves the discrete algebraic Riccati equation by fixed-point iteration
/// from P = Q, stopping when successive iterates differ by less than `tol` in
/// max-norm. Throws if `max_iterations` is reached first, which happens when
/// (A, B) is not stabilizable.
template <typename Scalar, int States, int Inputs>
DareSolution<Scalar, States> solve_dare(const Eigen::Matrix<Scalar, States, States>& A,
                                        const Eigen::Matrix<Scalar, States, Inputs>& B,
                                        const Eigen::Matrix<Scalar, States, States>& Q,
                                        const Eigen::Matrix<Scalar, Inputs, Inputs>& R,
                                        Scalar tol = Scalar(1e-10),
                                        std::int64_t max_iterations = 1'000'000) {
  DareSolution<Scalar, States> out;
  out.P = Q;
  for (std::int64_t it = 1; it <= max_iterations; ++it) {
    Eigen::Matrix<Scalar, States, States> next = riccati_step(out.P, A, B, Q, R);
    if (!next.allFinite()) break;
    const Scalar change = (next - out.P).cwiseAbs().maxCoeff();
    out.P = std::move(next);
    out.iterations = it;
    if (change < tol) return out;
  }
  throw std::runtime_error("solve_dare: no convergence; (A, B) may not be stabilizable");
}

/// Max-norm of the Riccati equation residual at P.
template <typename Scalar, int States, int Inputs>
Scalar dare_residual(const Eigen::Matrix<Scalar, States, States>& P,
                     const Eigen::Matrix<Scalar, States, States>& A,
                     const Eigen::Matrix<Scalar, States, Inputs>& B,
                     const Eigen::Matrix<Scalar, States, States>& Q,
                     const Eigen::Matrix<Scalar, Inputs, Inputs>& R) {
  return (riccati_step(P, A, B, Q, R) - P).cwiseAbs().maxCoeff();
}

/// Optimal feedback gain K = (R + B'PB)^-1 B'PA for the law u = -K x.
template <typename Scalar, int States, int Inputs>
Eigen::Matrix<Scalar, Inputs, States> dare_gain(const Eigen::Matrix<Scalar, States, States>& P,
                                                const Eigen::Matrix<Scalar, States, States>& A,
                                                const Eigen::Matrix<Scalar, States, Inputs>& B,
                                                const Eigen::Matrix<Scalar, Inputs, Inputs>& R) {
  const Eigen::Matrix<Scalar, Inputs, Inputs> S = R + B.transpose() * P * B;
  return S.ldlt().solve(B.transpose() * P * A);
}

}  // namespace rshac
