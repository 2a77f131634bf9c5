// Copyright 2026 The gobf-plr Authors
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

#include <functional>
#include <vector>

#include "gobf/basis.hpp"

namespace gobf {

/// Expansion coefficients of a signal on the basis, k = 1..K stored at 0..K-1.
struct HamboSignal {
  int eta_p = 1;
  std::vector<Eigen::VectorXd> coefficients;
  /// Energy of y on t >= 1 not captured by the K stored coefficients.
  double tail_bound = 0.0;

  double energy() const;
  /// sum_k coefficients[k] lambda^-k.
  Eigen::VectorXcd evaluate(cdouble lambda) const;
};

/// y~(k) = sum_t v_k(t) y(t). The basis spans sequences supported on t >= 1,
/// so y(0) never contributes.
HamboSignal hambo_signal_transform(const BasisSpec& spec, const Signal& y, int K);

/// Transfer function evaluated in the backward-shift variable w = q^-1.
using ShiftDomainFunction = std::function<cdouble(cdouble)>;

/// sum_k H(z_k) V_1(z_k) V_1^T(1/z_k) / (V_1^T(z_k) V_1(1/z_k)), z_k the
/// eigenvalues of A + B (lambda - D)^-1 C and H evaluated with q^-1 = z_k.
/// With this reading the all-pass G_b maps to lambda^-1 I.
Eigen::MatrixXcd hambo_operator_transform(const BalancedAllPass& realization,
                                          const ShiftDomainFunction& h, cdouble lambda);
Eigen::MatrixXcd hambo_operator_transform(const BasisSpec& spec, const RationalModel& h,
                                          cdouble lambda);

/// Matrix coefficients A_0..A_n (n = number of blocks) of the transform of
/// 1 + sum_k m_k^T V_k, which is a polynomial in lambda^-1. Validated against
/// hambo_operator_transform at 8 off-grid points.
std::vector<Eigen::MatrixXd> fir_hambo_coefficients(const BasisSpec& spec,
                                                    std::span<const double> m_blocks);

/// Evaluation grid: the 8th roots of unity, each rotated by 1e-3 rad when it
/// hits a vanishing normalizer.
std::vector<cdouble> validation_lambdas(const BalancedAllPass& realization,
                                        const ShiftDomainFunction& h, int count = 8,
                                        double offset = 0.0);

}  // namespace gobf
