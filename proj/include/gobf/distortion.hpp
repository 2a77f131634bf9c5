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

#include <optional>
#include <string_view>
#include <vector>

#include "gobf/basis.hpp"

namespace gobf {

/// p = rho e^{i sigma} with rho = exp(-zeta omega_o), sigma = sqrt(1 - zeta^2) omega_o.
struct ModalPole {
  double omega_o = 0.0;
  double zeta = 1.0;

  double rho() const;
  double sigma() const;
  cdouble pole() const;
};

ModalPole pole_to_modal(cdouble p);

/// Sum over the basis poles of (1 - |p|^2) / |1 - conj(p) e^{i omega}|^2.
double beta_prime(const BasisSpec& spec, double omega);
/// Single-pole kernel.
double beta_prime(cdouble pole, double omega);

/// Distortion rate from log-frequency to the Hambo frequency scale:
/// omega * beta'(omega) / pi.
double chi(const BasisSpec& spec, double omega);
double chi(cdouble pole, double omega);

struct ConservationResult {
  double raw = 0.0;         ///< integral of beta'/pi over [0, pi]; equals eta_p.
  double normalized = 0.0;  ///< raw / eta_p; equals 1.
  double error_estimate = 0.0;
};

/// The integral of chi over the log-frequency axis, computed as the integral
/// of beta'(omega)/pi over [0, pi] by adaptive Gauss-Kronrod on intervals
/// split around each pole's peak.
ConservationResult chi_conservation(const BasisSpec& spec);

enum class ChiShape { kIncreasingMaxAtPi, kInteriorMaximum, kInteriorMaxAndMin };
std::string_view to_string(ChiShape shape);

struct ChiExtremaReport {
  ModalPole modal;
  ChiShape classification = ChiShape::kIncreasingMaxAtPi;
  double omega_max = 0.0;
  std::optional<double> omega_min;
  bool hypothesis_holds = true;  ///< zeta^2 >= 1 - pi^2 / (4 omega_o^2)
  bool increasing_condition = false;  ///< cosh(zeta omega_o) - sigma >= pi/2
  bool minimum_condition = false;     ///< g(pi) > 0
  std::optional<bool> real_pole_condition;  ///< p > (pi - sqrt(pi^2 - 4)) / 2, real poles only
};

/// Classifies chi_k for one pole and locates its extrema by bracketed root
/// finding on g(omega) = (1 + rho^2)/(2 rho) - cos(omega - sigma) - omega sin(omega - sigma),
/// whose sign is the sign of d chi_k / d omega. When the hypothesis fails the
/// classification comes from the numerical search.
ChiExtremaReport chi_extrema(cdouble pole);

/// Threshold on a real pole separating the two chi shapes.
double real_pole_threshold();

/// Local maxima of the multi-pole chi, located on a log grid and refined.
std::vector<double> chi_local_maxima(const BasisSpec& spec, int grid_points = 4096);

/// Log-spaced grid of `points` frequencies over [lo, hi].
std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace gobf
