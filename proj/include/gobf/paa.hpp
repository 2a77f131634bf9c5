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

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gobf/convergence.hpp"
#include "gobf/predictor.hpp"

namespace gobf {

enum class Scheme { kHRls, kHErls, kHOloe };
std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);
/// H-RLS runs on GARX, H-ERLS on GARMAX, H-OLOE on GOE.
Structure structure_for(Scheme s);
Scheme scheme_for(Structure s);

struct PaaOptions {
  double f0_scale = 1000.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  std::optional<Eigen::VectorXd> theta0;
  /// Feed a posteriori (true) or a priori errors / predictions back into the
  /// regressor banks of GARMAX and GOE.
  bool a_posteriori_feedback = true;
  /// Keep every n-th theta in the trajectory; 0 disables it.
  std::size_t trajectory_decimation = 0;
  double divergence_threshold = 1e8;
  /// Cholesky check of F every n steps; 0 disables it.
  std::size_t pd_check_interval = 1000;
  int spr_grid = kDefaultSprGrid;

  void validate() const;
};

struct PaaStepResult {
  double apriori = 0.0;      ///< y - theta(t)^T phi
  double aposteriori = 0.0;  ///< y - theta(t+1)^T phi
};

class PaaState {
 public:
  PaaState(Eigen::VectorXd theta0, Eigen::MatrixXd f0, double lambda1, double lambda2);

  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::MatrixXd& F() const { return f_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }

  /// Throws kNumerical with conditioning details if F is not positive definite.
  void check_positive_definite() const;

 private:
  friend PaaStepResult paa_step(PaaState&, const Eigen::VectorXd&, double);
  Eigen::VectorXd theta_;
  Eigen::MatrixXd f_;
  Eigen::VectorXd f_phi_;
  double lambda1_;
  double lambda2_;
};

/// One adaptation step. With s = phi^T F phi:
///   F(t+1) = (F - lambda2 F phi phi^T F / (lambda1 + lambda2 s)) / lambda1
///   theta(t+1) = theta + F(t+1) phi eps_apriori = theta + F phi eps_aposteriori.
PaaStepResult paa_step(PaaState& state, const Eigen::VectorXd& phi, double y_next);

struct TrajectoryPoint {
  std::size_t t = 0;
  double epsilon = 0.0;
  Eigen::VectorXd theta;
};

struct IdentResult {
  PredictorConfig config;
  ParameterVector theta;
  std::vector<TrajectoryPoint> trajectory;
  Signal apriori_errors;
  Signal aposteriori_errors;
  RationalModel model;
  std::optional<SprReport> spr;
  /// (1/N) sum eps(t+1) phi(t), a posteriori.
  Eigen::VectorXd stationarity;
  double f_condition = 0.0;
  double f_min_eigenvalue = 0.0;
  PaaOptions options;
};

IdentResult run_identification(const PredictorConfig& config, const Signal& u, const Signal& y,
                               const PaaOptions& options = {});

}  // namespace gobf
