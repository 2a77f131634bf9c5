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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gobf/paa.hpp"

namespace gobf {

using FrequencyFunction = std::function<cdouble(double)>;
using DensityFunction = std::function<double(double)>;

/// x(t) [+ x(t)] + sum_k blocks_k^T V_k(q^-1) x(t): the filter X/A_o applied
/// through the basis, with the monic term included when `monic` is set.
Signal gobf_filter(const PredictorConfig& config, std::span<const double> blocks, bool monic,
                   const Signal& x);

/// eps(t) = y(t) - theta^T phi(t-1) for a frozen theta, running the
/// structure's own feedback (yhat for GOE, eps for GARMAX).
Signal prediction_error(const PredictorConfig& config, const ParameterVector& theta,
                        const Signal& u, const Signal& y);

/// Equivalent prediction error at a frozen theta. `y` is the measured output
/// G u + W e (or G u + v). H-ERLS needs e, H-OLOE needs v; H-RLS ignores the
/// noise stream and returns the predictor's own error.
Signal equivalent_prediction_error(Scheme scheme, const PredictorConfig& config,
                                   const ParameterVector& theta, const Signal& u, const Signal& y,
                                   const std::optional<Signal>& noise);

/// Same, with y built from the true system and noise.
Signal equivalent_prediction_error(Scheme scheme, const PredictorConfig& config,
                                   const ParameterVector& theta, const LinearSystem& g,
                                   const std::optional<LinearSystem>& w, const Signal& u,
                                   const Signal& noise);

struct SpectralDensity {
  std::vector<double> omega;
  std::vector<double> density;
  std::string window = "hann";
  std::size_t segment_length = 0;
  double overlap = 0.0;
  std::size_t segments = 0;

  /// Linear interpolation, clamped at the ends of the grid.
  double at(double omega) const;
};

enum class SpectralWindow { kHann, kRectangular };

struct SpectrumOptions {
  std::size_t segment_length = 4096;
  double overlap = 0.5;
  /// Rectangular segments of exactly one period give the periodogram of a
  /// periodic input such as a PRBS.
  SpectralWindow window = SpectralWindow::kHann;
};

/// Welch estimate, normalised by sum(w^2) so that white noise of variance s^2
/// gives a flat density s^2. Grid omega_k = 2 pi k / L, k = 1..L/2.
SpectralDensity estimate_spectrum(const Signal& x, const SpectrumOptions& options = {});

/// Union of `uniform` equispaced points on [0, pi] and `logarithmic` points
/// on [1e-7, pi], sorted. The log part resolves lightly damped modes close to
/// omega = 0.
std::vector<double> criterion_grid(std::size_t uniform = 4096, std::size_t logarithmic = 4096);

struct CriterionInputs {
  FrequencyFunction g;
  std::optional<FrequencyFunction> w;
  DensityFunction phi_uu;
  std::optional<DensityFunction> phi_ee;
};

struct CriterionResult {
  double value = 0.0;
  std::size_t flagged_points = 0;  ///< grid points where A^/A_o was not finite
};

/// (1/pi) int_0^pi of the limit-model integrand of the scheme:
///   H-RLS : |A^/A_o G - B^/A_o|^2 Phi_uu + |A^/A_o W - 1|^2 Phi_ee
///   H-ERLS: |A^/A_o G - B^/A_o|^2 Phi_uu + |A^/A_o W - C^/A_o|^2 Phi_ee
///   H-OLOE: |A^/A_o G - B^/A_o|^2 Phi_uu
/// The noise terms are strictly proper, so for white e of variance s^2 the
/// variance of the equivalent error is value + s^2 (value + var v for H-OLOE).
CriterionResult limit_criterion(Scheme scheme, const GobfModel& model, const CriterionInputs& in,
                                std::span<const double> grid);
CriterionResult limit_criterion(Scheme scheme, const GobfModel& model, const CriterionInputs& in);

struct BandFit {
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  double error = 0.0;  ///< mean |log10|G| - log10|G^|| over the band
};

struct BandFitReport {
  std::vector<BandFit> bands;
};

BandFitReport band_fit(const FrequencyFunction& g, const FrequencyFunction& g_hat,
                       const std::vector<std::pair<double, double>>& bands,
                       std::size_t points_per_band = 256);

}  // namespace gobf
