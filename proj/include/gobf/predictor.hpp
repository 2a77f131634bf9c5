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

/// Predictor families. GARX feeds the measured output, GARMAX additionally
/// the prediction error, GOE feeds back its own prediction.
enum class Structure { kGarx, kGarmax, kGoe };
std::string_view to_string(Structure s);
Structure structure_from_string(std::string_view name);

class PredictorConfig {
 public:
  PredictorConfig(Structure structure, BasisSpec spec, int eta_a);

  Structure structure() const { return structure_; }
  const BasisSpec& spec() const { return spec_; }
  const BalancedAllPass& realization() const { return realization_; }
  int eta_a() const { return eta_a_; }
  int eta_p() const { return spec_.eta_p(); }
  int n_blocks() const { return eta_a_ / spec_.eta_p(); }
  int n_groups() const { return structure_ == Structure::kGarmax ? 3 : 2; }
  int dimension() const { return n_groups() * eta_a_; }

 private:
  Structure structure_;
  BasisSpec spec_;
  BalancedAllPass realization_;
  int eta_a_;
};

/// theta = [m_1 .. m_n | n_1 .. n_n | l_1 .. l_n (GARMAX)], each block eta_p long.
class ParameterVector {
 public:
  explicit ParameterVector(const PredictorConfig& config);
  ParameterVector(const PredictorConfig& config, Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  Eigen::Index size() const { return values_.size(); }

  /// All m (resp. n, l) blocks as one contiguous span.
  std::span<const double> m() const { return group(0); }
  std::span<const double> n() const { return group(1); }
  std::span<const double> l() const;
  /// Block k (1-based) of a group.
  Eigen::Map<const Eigen::VectorXd> m_block(int k) const { return block(0, k); }
  Eigen::Map<const Eigen::VectorXd> n_block(int k) const { return block(1, k); }
  Eigen::Map<const Eigen::VectorXd> l_block(int k) const;

 private:
  std::span<const double> group(int g) const;
  Eigen::Map<const Eigen::VectorXd> block(int g, int k) const;

  int eta_a_;
  int eta_p_;
  int groups_;
  Eigen::VectorXd values_;
};

/// Streaming regressor. step() consumes the samples at time t and returns
/// phi(t) = [-V_k(q^-1) o(t+1) | V_k(q^-1) u(t+1) | V_k(q^-1) eps(t+1)], which
/// depends on samples up to t only.
class Regressor {
 public:
  explicit Regressor(const PredictorConfig& config);

  /// `output` is y(t) for GARX/GARMAX and yhat(t) for GOE; `eps` is required
  /// for GARMAX and rejected otherwise.
  const Eigen::VectorXd& step(double u, double output, std::optional<double> eps = std::nullopt);
  const Eigen::VectorXd& phi() const { return phi_; }
  void reset();

 private:
  Structure structure_;
  int eta_a_;
  FilterBank out_bank_;
  FilterBank in_bank_;
  std::optional<FilterBank> eps_bank_;
  Eigen::VectorXd phi_;
};

/// theta^T phi.
double predict(const ParameterVector& theta, const Eigen::VectorXd& phi);
double predict(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi);

/// Frequency response straight from the basis expansion; well conditioned for
/// basis poles arbitrarily close to the unit circle.
class GobfModel {
 public:
  GobfModel(PredictorConfig config, ParameterVector theta);

  const PredictorConfig& config() const { return config_; }
  const ParameterVector& theta() const { return theta_; }

  /// A^/A_o = 1 + sum m_k^T V_k at z = e^{i omega}.
  cdouble a_over_ao(double omega) const;
  /// B^/A_o = sum n_k^T V_k.
  cdouble b_over_ao(double omega) const;
  /// C^/A_o: 1 + sum l_k^T V_k (GARMAX), 1 (GARX); empty for GOE.
  std::optional<cdouble> c_over_ao(double omega) const;
  cdouble response(double omega) const;
  /// W^ = C^/A^ (GARMAX) or A_o/A^ (GARX).
  std::optional<cdouble> noise_response(double omega) const;

 private:
  PredictorConfig config_;
  ParameterVector theta_;
};

/// Classical polynomial form: numerator B^, denominator A^ (monic, degree eta_a),
/// noise numerator C^ (GARMAX) or A_o (GARX). The expansion is checked at 32
/// unit-circle points against the basis form; the tolerance is 1e-8 scaled by
/// the coefficient magnitudes, since the expanded polynomials carry the
/// conditioning of A_o.
RationalModel gobf_to_rational(const ParameterVector& theta, const PredictorConfig& config);

/// Polynomial X^ with X^/A_o = [1 +] sum x_k^T V_k for one block group.
Polynomial gobf_numerator(const PredictorConfig& config, std::span<const double> blocks, bool monic_part);

/// Zeros of 1 + sum x_k^T V_k(z), from the state-space form of the cascade.
std::vector<cdouble> gobf_monic_zeros(const PredictorConfig& config, std::span<const double> blocks);

struct FrequencyPoint {
  double omega = 0.0;
  cdouble value{0.0, 0.0};
  bool ok = true;
};

std::vector<FrequencyPoint> freq_response(const RationalModel& model, std::span<const double> omegas);

/// State-space form (A, B) of an n-section cascade: x(t+1) = A x(t) + B s(t),
/// state = stacked V_k(q^-1) s(t).
struct CascadeStateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
};
CascadeStateSpace cascade_state_space(const BalancedAllPass& realization, int n_sections);

}  // namespace gobf
