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

#include "gobf/paa.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace gobf {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kHRls:
      return "hrls";
    case Scheme::kHErls:
      return "herls";
    case Scheme::kHOloe:
      return "holoe";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "hrls") return Scheme::kHRls;
  if (name == "herls") return Scheme::kHErls;
  if (name == "holoe") return Scheme::kHOloe;
  throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown scheme '{}'", name));
}

Structure structure_for(Scheme s) {
  switch (s) {
    case Scheme::kHRls:
      return Structure::kGarx;
    case Scheme::kHErls:
      return Structure::kGarmax;
    case Scheme::kHOloe:
      break;
  }
  return Structure::kGoe;
}

Scheme scheme_for(Structure s) {
  switch (s) {
    case Structure::kGarx:
      return Scheme::kHRls;
    case Structure::kGarmax:
      return Scheme::kHErls;
    case Structure::kGoe:
      break;
  }
  return Scheme::kHOloe;
}

void PaaOptions::validate() const {
  if (!(f0_scale > 0.0) || !std::isfinite(f0_scale)) {
    throw Error(ErrorCode::kInvalidArgument, "F0 scale must be positive");
  }
  if (!(lambda1 > 0.0 && lambda1 <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("lambda1 = {} outside (0, 1]", lambda1));
  }
  if (!(lambda2 >= 0.0 && lambda2 < 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("lambda2 = {} outside [0, 2)", lambda2));
  }
  if (!(divergence_threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "divergence threshold must be positive");
  }
}

PaaState::PaaState(Eigen::VectorXd theta0, Eigen::MatrixXd f0, double lambda1, double lambda2)
    : theta_(std::move(theta0)), f_(std::move(f0)), lambda1_(lambda1), lambda2_(lambda2) {
  if (f_.rows() != theta_.size() || f_.cols() != theta_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "PAA: F and theta dimensions differ");
  }
  if (!(lambda1 > 0.0 && lambda1 <= 1.0) || !(lambda2 >= 0.0 && lambda2 < 2.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("PAA: forgetting factors ({}, {}) out of range", lambda1, lambda2));
  }
  f_phi_.resize(theta_.size());
  check_positive_definite();
}

void PaaState::check_positive_definite() const {
  Eigen::LLT<Eigen::MatrixXd> llt(f_);
  if (llt.info() == Eigen::Success && f_.allFinite()) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f_, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  throw Error(ErrorCode::kNumerical,
              fmt::format("adaptation gain lost positive definiteness: eigenvalues in [{:.3e}, {:.3e}]",
                          ev.size() ? ev.minCoeff() : 0.0, ev.size() ? ev.maxCoeff() : 0.0));
}

PaaStepResult paa_step(PaaState& state, const Eigen::VectorXd& phi, double y_next) {
  if (phi.size() != state.theta_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("paa_step: phi has {} entries, theta has {}", phi.size(),
                            state.theta_.size()));
  }
  PaaStepResult r;
  r.apriori = y_next - state.theta_.dot(phi);
  auto& fphi = state.f_phi_;
  fphi.noalias() = state.f_.selfadjointView<Eigen::Lower>() * phi;
  const double s = phi.dot(fphi);
  const double l1 = state.lambda1_;
  const double l2 = state.lambda2_;
  // F(t+1) phi = F phi / (lambda1 + lambda2 s).
  const double denom = l1 + l2 * s;
  state.theta_.noalias() += fphi * (r.apriori / denom);
  r.aposteriori = r.apriori * (1.0 - s / denom);
  state.f_.selfadjointView<Eigen::Lower>().rankUpdate(fphi, -l2 / denom);
  if (l1 != 1.0) state.f_ /= l1;
  state.f_.triangularView<Eigen::StrictlyUpper>() = state.f_.transpose();
  return r;
}

IdentResult run_identification(const PredictorConfig& config, const Signal& u, const Signal& y,
                               const PaaOptions& options) {
  options.validate();
  if (u.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("input has {} samples, output has {}", u.size(), y.size()));
  }
  if (u.empty()) throw Error(ErrorCode::kInvalidArgument, "empty data set");
  const Eigen::Index dim = config.dimension();
  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(dim);
  if (options.theta0) {
    if (options.theta0->size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "theta0 dimension mismatch");
    }
    theta0 = *options.theta0;
  }
  PaaState state(theta0, Eigen::MatrixXd::Identity(dim, dim) * options.f0_scale, options.lambda1,
                 options.lambda2);
  Regressor regressor(config);
  const Structure structure = config.structure();
  const std::size_t n = u.size();

  std::vector<double> apriori(n), aposteriori(n);
  std::vector<TrajectoryPoint> trajectory;
  Eigen::VectorXd stationarity = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(dim);

  for (std::size_t t = 0; t < n; ++t) {
    PaaStepResult r;
    if (t == 0) {
      r.apriori = y[0] - state.theta().dot(phi);
      r.aposteriori = r.apriori;
    } else {
      r = paa_step(state, phi, y[t]);
      stationarity.noalias() += phi * r.aposteriori;
      const double norm = state.theta().norm();
      if (!std::isfinite(norm) || norm > options.divergence_threshold) {
        throw Error(ErrorCode::kDivergence,
                    fmt::format("{} diverged at t = {}: |theta| = {:.3e}, last error {:.3e}, "
                                "trace(F) = {:.3e}",
                                to_string(scheme_for(structure)), t, norm, r.apriori,
                                state.F().trace()));
      }
      if (options.pd_check_interval && t % options.pd_check_interval == 0) {
        state.check_positive_definite();
      }
    }
    apriori[t] = r.apriori;
    aposteriori[t] = r.aposteriori;
    if (options.trajectory_decimation && t % options.trajectory_decimation == 0) {
      trajectory.push_back({t, r.apriori, state.theta()});
    }
    const double eps = options.a_posteriori_feedback ? r.aposteriori : r.apriori;
    switch (structure) {
      case Structure::kGarx:
        phi = regressor.step(u[t], y[t]);
        break;
      case Structure::kGarmax:
        phi = regressor.step(u[t], y[t], eps);
        break;
      case Structure::kGoe:
        phi = regressor.step(u[t], y[t] - eps);
        break;
    }
  }
  if (n > 1) stationarity /= static_cast<double>(n - 1);

  state.check_positive_definite();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.F(), Eigen::EigenvaluesOnly);
  ParameterVector theta(config, state.theta());
  IdentResult result{config,
                     theta,
                     std::move(trajectory),
                     Signal(std::move(apriori)),
                     Signal(std::move(aposteriori)),
                     gobf_to_rational(theta, config),
                     std::nullopt,
                     std::move(stationarity),
                     es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff(),
                     es.eigenvalues().minCoeff(),
                     options};
  if (structure == Structure::kGarmax) {
    result.spr = spr_check_gobf(config, theta.l(), options.lambda2, options.spr_grid);
  } else if (structure == Structure::kGoe) {
    result.spr = spr_check_gobf(config, theta.m(), options.lambda2, options.spr_grid);
  }
  return result;
}

}  // namespace gobf
