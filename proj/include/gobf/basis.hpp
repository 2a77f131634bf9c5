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

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "gobf/lti.hpp"

namespace gobf {

/// Ordered, conjugate-closed set of strictly stable basis poles.
/// Ordering is part of the basis: two orderings of one pole set give
/// different (equally valid) bases.
class BasisSpec {
 public:
  const std::vector<cdouble>& poles() const { return poles_; }
  int eta_p() const { return static_cast<int>(poles_.size()); }
  double max_modulus() const;

 private:
  friend BasisSpec validate_basis(std::span<const cdouble>, bool);
  std::vector<cdouble> poles_;
};

/// Checks stability (|p| < 1) and conjugate closure. With `complete_conjugates`
/// set, a missing conjugate is appended right after its partner instead of
/// raising a realness error.
BasisSpec validate_basis(std::span<const cdouble> poles, bool complete_conjugates = false);
BasisSpec validate_basis(std::initializer_list<cdouble> poles);

/// prod_k (p_k - z_inv) / (1 - p_k z_inv).
cdouble blaschke_eval(const BasisSpec& spec, cdouble z_inv);

/// Real realization of the Blaschke product whose system matrix
/// [[A, B], [C, D]] is orthogonal.
struct BalancedAllPass {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  int order() const { return static_cast<int>(A.rows()); }
  Eigen::MatrixXd system_matrix() const;
  /// D + C (zI - A)^-1 B.
  cdouble transfer(cdouble z) const;
  /// (zI - A)^-1 B.
  Eigen::VectorXcd input_to_state(cdouble z) const;
};

/// Built as a cascade of orthogonal sections in pole order: a first-order
/// rotation per real pole and a two-rotation lattice per conjugate pair.
BalancedAllPass balanced_realization(const BasisSpec& spec);

/// V_k(z) = (zI - A)^-1 B G_b(z)^{k-1}, k >= 1.
Eigen::VectorXcd basis_response(const BalancedAllPass& realization, int k, cdouble z);
Eigen::VectorXcd basis_response(const BasisSpec& spec, int k, cdouble z);

/// sum_k blocks[k]^T V_{k+1}(z), blocks stacked contiguously (eta_p each).
cdouble basis_combination(const BalancedAllPass& realization, std::span<const double> blocks,
                          cdouble z);

/// Streaming cascade computing V_1(q^-1)s(t), ..., V_n(q^-1)s(t).
/// Section 1 integrates s through (A, B); section j+1 is driven by the
/// all-pass output of section j.
class FilterBank {
 public:
  FilterBank(const BalancedAllPass& realization, int n_sections);

  int n_sections() const { return n_sections_; }
  int eta_p() const { return eta_p_; }
  int dimension() const { return n_sections_ * eta_p_; }

  /// Stacked outputs at the current time t; depends on s(0..t-1) only.
  std::span<const double> outputs() const { return state_; }
  /// Consumes s(t) and advances to t+1.
  void push(double s);
  void reset();

 private:
  int eta_p_;
  int n_sections_;
  std::vector<double> a_;  // row-major eta_p x eta_p
  std::vector<double> b_;
  std::vector<double> c_;
  double d_;
  std::vector<double> state_;
  std::vector<double> scratch_;
};

/// Outputs of a fresh bank for every sample of `s` (before consuming it).
std::vector<Eigen::VectorXd> filter_bank_run(const BalancedAllPass& realization, int n_sections,
                                             const Signal& s);

/// Impulse responses v_k(t), t = 0..length-1; result[k-1] is eta_p x length.
std::vector<Eigen::MatrixXd> basis_impulse_responses(const BalancedAllPass& realization,
                                                     int n_sections, std::size_t length);

/// A_o(q^-1) = prod_k (1 - p_k q^-1)^{eta_a / eta_p}, untrimmed (formal degree eta_a).
Polynomial characteristic_poly_ao(const BasisSpec& spec, int eta_a);

/// ceil(ln(tol) / ln(max|p|)) capped at `cap`; 1 for the delay basis.
std::size_t truncation_length(const BasisSpec& spec, double tol = 1e-12, std::size_t cap = 1000000);

}  // namespace gobf
