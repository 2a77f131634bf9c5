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
#include <string>

#include "gobf/predictor.hpp"

namespace gobf {

/// Frequency-grid check of H(z) = A_o(z^-1)/D(z^-1) - lambda2/2 on omega in [0, pi];
/// every discrete local minimum of the grid is refined with Brent.
struct SprReport {
  std::string transfer;
  double min_real_part = 0.0;
  double argmin_omega = 0.0;
  bool denominator_stable = false;
  double denominator_radius = 0.0;
  bool is_spr = false;
  int grid_size = 0;
  std::string reason;
};

inline constexpr int kDefaultSprGrid = 8192;
inline constexpr double kSprMargin = 1e-9;

SprReport spr_check(const Polynomial& a_o, const Polynomial& d, double lambda2,
                    int grid = kDefaultSprGrid);

/// Same check for a ratio given pointwise, e.g. A_o/D evaluated through the
/// basis form; `radius` is the largest root modulus of D.
SprReport spr_check(const std::function<cdouble(double)>& ratio, double radius, double lambda2,
                    int grid = kDefaultSprGrid, std::string transfer = "A_o/D - lambda2/2");

/// D/A_o = 1 + sum x_k^T V_k on the predictor basis (x = C^ blocks for H-ERLS,
/// A^ blocks for H-OLOE).
SprReport spr_check_gobf(const PredictorConfig& config, std::span<const double> blocks,
                         double lambda2, int grid = kDefaultSprGrid);

}  // namespace gobf
