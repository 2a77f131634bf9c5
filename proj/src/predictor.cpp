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

#include "gobf/predictor.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace gobf {

namespace {

constexpr int kValidationPoints = 32;
constexpr double kValidationTol = 1e-8;

double abs_sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

}  // namespace

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::kGarx:
      return "garx";
    case Structure::kGarmax:
      return "garmax";
    case Structure::kGoe:
      return "goe";
  }
  return "unknown";
}

Structure structure_from_string(std::string_view name) {
  if (name == "garx") return Structure::kGarx;
  if (name == "garmax") return Structure::kGarmax;
  if (name == "goe") return Structure::kGoe;
  throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown predictor structure '{}'", name));
}

PredictorConfig::PredictorConfig(Structure structure, BasisSpec spec, int eta_a)
    : structure_(structure), spec_(std::move(spec)), eta_a_(eta_a) {
  if (spec_.eta_p() < 1) throw Error(ErrorCode::kInvalidArgument, "empty basis");
  if (eta_a_ < 1 || eta_a_ % spec_.eta_p() != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("eta_a = {} is not a positive multiple of eta_p = {}", eta_a_,
                            spec_.eta_p()));
  }
  realization_ = balanced_realization(spec_);
}

ParameterVector::ParameterVector(const PredictorConfig& config)
    : ParameterVector(config, Eigen::VectorXd::Zero(config.dimension())) {}

ParameterVector::ParameterVector(const PredictorConfig& config, Eigen::VectorXd values)
    : eta_a_(config.eta_a()),
      eta_p_(config.eta_p()),
      groups_(config.n_groups()),
      values_(std::move(values)) {
  if (values_.size() != config.dimension()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("parameter dimension {} does not match predictor dimension {}",
                            values_.size(), config.dimension()));
  }
}

std::span<const double> ParameterVector::group(int g) const {
  return {values_.data() + static_cast<std::ptrdiff_t>(g) * eta_a_,
          static_cast<std::size_t>(eta_a_)};
}

std::span<const double> ParameterVector::l() const {
  if (groups_ < 3) throw Error(ErrorCode::kInvalidArgument, "l blocks exist only for GARMAX");
  return group(2);
}

Eigen::Map<const Eigen::VectorXd> ParameterVector::block(int g, int k) const {
  if (k < 1 || k > eta_a_ / eta_p_) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("block index {} out of range", k));
  }
  return {values_.data() + static_cast<std::ptrdiff_t>(g) * eta_a_ + (k - 1) * eta_p_, eta_p_};
}

Eigen::Map<const Eigen::VectorXd> ParameterVector::l_block(int k) const {
  if (groups_ < 3) throw Error(ErrorCode::kInvalidArgument, "l blocks exist only for GARMAX");
  return block(2, k);
}

Regressor::Regressor(const PredictorConfig& config)
    : structure_(config.structure()),
      eta_a_(config.eta_a()),
      out_bank_(config.realization(), config.n_blocks()),
      in_bank_(config.realization(), config.n_blocks()),
      phi_(Eigen::VectorXd::Zero(config.dimension())) {
  if (structure_ == Structure::kGarmax) eps_bank_.emplace(config.realization(), config.n_blocks());
}

const Eigen::VectorXd& Regressor::step(double u, double output, std::optional<double> eps) {
  if (structure_ == Structure::kGarmax && !eps) {
    throw Error(ErrorCode::kInvalidArgument, "GARMAX regressor needs the prediction error stream");
  }
  if (structure_ != Structure::kGarmax && eps) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} regressor takes no prediction error stream", to_string(structure_)));
  }
  out_bank_.push(output);
  in_bank_.push(u);
  const auto o = out_bank_.outputs();
  const auto i = in_bank_.outputs();
  for (int k = 0; k < eta_a_; ++k) {
    phi_(k) = -o[k];
    phi_(eta_a_ + k) = i[k];
  }
  if (eps_bank_) {
    eps_bank_->push(*eps);
    const auto e = eps_bank_->outputs();
    for (int k = 0; k < eta_a_; ++k) phi_(2 * eta_a_ + k) = e[k];
  }
  return phi_;
}

void Regressor::reset() {
  out_bank_.reset();
  in_bank_.reset();
  if (eps_bank_) eps_bank_->reset();
  phi_.setZero();
}

double predict(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi) {
  if (theta.size() != phi.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("predict: theta has {} entries, phi has {}", theta.size(), phi.size()));
  }
  return theta.dot(phi);
}

double predict(const ParameterVector& theta, const Eigen::VectorXd& phi) {
  return predict(theta.values(), phi);
}

GobfModel::GobfModel(PredictorConfig config, ParameterVector theta)
    : config_(std::move(config)), theta_(std::move(theta)) {}

cdouble GobfModel::a_over_ao(double omega) const {
  return 1.0 + basis_combination(config_.realization(), theta_.m(), std::polar(1.0, omega));
}

cdouble GobfModel::b_over_ao(double omega) const {
  return basis_combination(config_.realization(), theta_.n(), std::polar(1.0, omega));
}

std::optional<cdouble> GobfModel::c_over_ao(double omega) const {
  switch (config_.structure()) {
    case Structure::kGarmax:
      return 1.0 + basis_combination(config_.realization(), theta_.l(), std::polar(1.0, omega));
    case Structure::kGarx:
      return cdouble{1.0, 0.0};
    case Structure::kGoe:
      break;
  }
  return std::nullopt;
}

cdouble GobfModel::response(double omega) const { return b_over_ao(omega) / a_over_ao(omega); }

std::optional<cdouble> GobfModel::noise_response(double omega) const {
  const auto c = c_over_ao(omega);
  if (!c) return std::nullopt;
  return *c / a_over_ao(omega);
}

Polynomial gobf_numerator(const PredictorConfig& config, std::span<const double> blocks,
                          bool monic_part) {
  const int eta_a = config.eta_a();
  if (blocks.size() != static_cast<std::size_t>(eta_a)) {
    throw Error(ErrorCode::kInvalidArgument, "gobf_numerator: block group size mismatch");
  }
  // Markov parameters of sum x_k^T V_k, then N = A_o * h up to degree eta_a.
  FilterBank bank(config.realization(), config.n_blocks());
  std::vector<double> h(eta_a + 1, 0.0);
  for (int t = 0; t <= eta_a; ++t) {
    const auto o = bank.outputs();
    double acc = 0.0;
    for (int k = 0; k < eta_a; ++k) acc += blocks[k] * o[k];
    h[t] = acc;
    bank.push(t == 0 ? 1.0 : 0.0);
  }
  const Polynomial ao = characteristic_poly_ao(config.spec(), eta_a);
  std::vector<double> n(eta_a + 1, 0.0);
  for (int i = 0; i <= eta_a; ++i) {
    double acc = monic_part ? ao[i] : 0.0;
    for (int j = 0; j <= i; ++j) acc += ao[j] * h[i - j];
    n[i] = acc;
  }
  return Polynomial(std::move(n));
}

namespace {

void validate_numerator(const PredictorConfig& config, const Polynomial& ao, const Polynomial& n,
                        std::span<const double> blocks, bool monic_part, std::string_view what) {
  const double ao_scale = abs_sum(ao.coefficients());
  const double n_scale = abs_sum(n.coefficients());
  for (int j = 0; j < kValidationPoints; ++j) {
    const double omega = 2.0 * std::numbers::pi * (j + 0.5) / kValidationPoints;
    const cdouble z = std::polar(1.0, omega);
    const cdouble w = std::conj(z);
    cdouble s = basis_combination(config.realization(), blocks, z);
    if (monic_part) s += 1.0;
    const cdouble diff = n.eval(w) - ao.eval(w) * s;
    const double tol = kValidationTol * (1.0 + n_scale + ao_scale * (1.0 + std::abs(s)));
    if (!(std::abs(diff) <= tol)) {
      throw Error(ErrorCode::kConsistency,
                  fmt::format("gobf_to_rational: {} polynomial disagrees with the basis form at "
                              "omega = {:.6g} (|diff| = {:.3e}, tol = {:.3e})",
                              what, omega, std::abs(diff), tol));
    }
  }
}

}  // namespace

RationalModel gobf_to_rational(const ParameterVector& theta, const PredictorConfig& config) {
  if (theta.size() != config.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, "gobf_to_rational: dimension mismatch");
  }
  const Polynomial ao = characteristic_poly_ao(config.spec(), config.eta_a());
  Polynomial a = gobf_numerator(config, theta.m(), true);
  Polynomial b = gobf_numerator(config, theta.n(), false);
  validate_numerator(config, ao, a, theta.m(), true, "denominator");
  validate_numerator(config, ao, b, theta.n(), false, "numerator");
  std::optional<Polynomial> c;
  if (config.structure() == Structure::kGarmax) {
    c = gobf_numerator(config, theta.l(), true);
    validate_numerator(config, ao, *c, theta.l(), true, "noise numerator");
  } else if (config.structure() == Structure::kGarx) {
    c = ao;
  }
  // Keep the formal degree of the denominator; trim the others.
  return RationalModel(b.trimmed(), a, c ? std::optional<Polynomial>(c->trimmed()) : std::nullopt);
}

CascadeStateSpace cascade_state_space(const BalancedAllPass& realization, int n_sections) {
  const int np = realization.order();
  const int n = np * n_sections;
  CascadeStateSpace ss{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  // Drive of section j as Cw x + Dw s.
  Eigen::RowVectorXd cw = Eigen::RowVectorXd::Zero(n);
  double dw = 1.0;
  for (int j = 0; j < n_sections; ++j) {
    const int off = j * np;
    ss.A.middleRows(off, np) += realization.B * cw;
    ss.A.block(off, off, np, np) += realization.A;
    ss.B.segment(off, np) = realization.B * dw;
    cw = realization.D * cw;
    cw.segment(off, np) += realization.C;
    dw *= realization.D;
  }
  return ss;
}

std::vector<cdouble> gobf_monic_zeros(const PredictorConfig& config,
                                      std::span<const double> blocks) {
  if (blocks.size() != static_cast<std::size_t>(config.eta_a())) {
    throw Error(ErrorCode::kInvalidArgument, "gobf_monic_zeros: block group size mismatch");
  }
  const auto ss = cascade_state_space(config.realization(), config.n_blocks());
  const Eigen::Map<const Eigen::RowVectorXd> k(blocks.data(), static_cast<Eigen::Index>(blocks.size()));
  const Eigen::MatrixXd closed = ss.A - ss.B * k;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(closed, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "gobf_monic_zeros: eigenvalue computation failed");
  }
  const auto ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<FrequencyPoint> freq_response(const RationalModel& model,
                                          std::span<const double> omegas) {
  std::vector<FrequencyPoint> out;
  out.reserve(omegas.size());
  for (double omega : omegas) {
    const cdouble w = std::polar(1.0, -omega);
    const cdouble den = model.denominator.eval(w);
    FrequencyPoint p{omega, {0.0, 0.0}, true};
    if (std::abs(den) <= 1e-14 * (1.0 + abs_sum(model.denominator.coefficients()))) {
      p.ok = false;
    } else {
      p.value = model.numerator.eval(w) / den;
      p.ok = std::isfinite(p.value.real()) && std::isfinite(p.value.imag());
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace gobf
