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

#include "gobf/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

namespace gobf {

SprReport spr_check(const std::function<cdouble(double)>& ratio, double radius, double lambda2,
                    int grid, std::string transfer) {
  if (grid < 256) throw Error(ErrorCode::kInvalidArgument, "spr_check: grid must have >= 256 points");
  SprReport report;
  report.transfer = std::move(transfer);
  report.grid_size = grid;
  report.denominator_radius = radius;
  report.denominator_stable = radius < 1.0;
  report.min_real_part = std::numeric_limits<double>::infinity();
  const auto real_part = [&](double omega) { return ratio(omega).real() - lambda2 / 2.0; };
  std::vector<double> values(grid);
  const auto omega_at = [grid](int j) { return std::numbers::pi * j / (grid - 1); };
  for (int j = 0; j < grid; ++j) {
    values[j] = real_part(omega_at(j));
    if (!std::isfinite(values[j])) {
      report.min_real_part = -std::numeric_limits<double>::infinity();
      report.argmin_omega = omega_at(j);
      break;
    }
    if (values[j] < report.min_real_part) {
      report.min_real_part = values[j];
      report.argmin_omega = omega_at(j);
    }
  }
  // Each discrete local minimum is polished with Brent on its two neighbouring cells.
  if (std::isfinite(report.min_real_part)) {
    for (int j = 0; j < grid; ++j) {
      const bool left = j == 0 || values[j] <= values[j - 1];
      const bool right = j + 1 == grid || values[j] <= values[j + 1];
      if (!left || !right) continue;
      const auto [w, v] = boost::math::tools::brent_find_minima(
          real_part, omega_at(std::max(j - 1, 0)), omega_at(std::min(j + 1, grid - 1)), 40);
      if (v < report.min_real_part) {
        report.min_real_part = v;
        report.argmin_omega = w;
      }
    }
  }
  const bool positive = report.min_real_part > kSprMargin;
  report.is_spr = positive && report.denominator_stable;
  if (!report.denominator_stable) {
    report.reason = fmt::format("denominator not stable (root radius {:.6g})", radius);
  } else if (!positive) {
    report.reason = fmt::format("real part {:.6g} at omega = {:.6g} is not above {:g}",
                                report.min_real_part, report.argmin_omega, kSprMargin);
  }
  return report;
}

SprReport spr_check(const Polynomial& a_o, const Polynomial& d, double lambda2, int grid) {
  if (!d.is_monic()) throw Error(ErrorCode::kInvalidArgument, "spr_check: D must be monic");
  const auto ratio = [&](double omega) {
    const cdouble w = std::polar(1.0, -omega);
    return a_o.eval(w) / d.eval(w);
  };
  return spr_check(ratio, d.root_radius(), lambda2, grid);
}

SprReport spr_check_gobf(const PredictorConfig& config, std::span<const double> blocks,
                         double lambda2, int grid) {
  double radius = 0.0;
  for (const auto& z : gobf_monic_zeros(config, blocks)) radius = std::max(radius, std::abs(z));
  const auto ratio = [&](double omega) {
    return 1.0 / (1.0 + basis_combination(config.realization(), blocks, std::polar(1.0, omega)));
  };
  return spr_check(ratio, radius, lambda2, grid);
}

}  // namespace gobf
