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

#include "gobf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>

namespace gobf {

namespace {

void require_same_length(const Signal& a, const Signal& b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{}: signal lengths differ ({} vs {})", what, a.size(), b.size()));
  }
}

void require_scheme_matches(Scheme scheme, const PredictorConfig& config) {
  if (structure_for(scheme) != config.structure()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("scheme {} does not run on a {} predictor", to_string(scheme),
                            to_string(config.structure())));
  }
}

Signal combine(const Signal& a, double sa, const Signal& b, double sb) {
  Signal out = a;
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = sa * a[t] + sb * b[t];
  return out;
}

}  // namespace

Signal gobf_filter(const PredictorConfig& config, std::span<const double> blocks, bool monic,
                   const Signal& x) {
  if (blocks.size() != static_cast<std::size_t>(config.eta_a())) {
    throw Error(ErrorCode::kInvalidArgument, "gobf_filter: block group size mismatch");
  }
  FilterBank bank(config.realization(), config.n_blocks());
  Signal out = x;
  const std::size_t dim = blocks.size();
  for (std::size_t t = 0; t < x.size(); ++t) {
    const auto o = bank.outputs();
    double acc = monic ? x[t] : 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += blocks[k] * o[k];
    out[t] = acc;
    bank.push(x[t]);
  }
  return out;
}

Signal prediction_error(const PredictorConfig& config, const ParameterVector& theta,
                        const Signal& u, const Signal& y) {
  require_same_length(u, y, "prediction_error");
  Regressor regressor(config);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(config.dimension());
  Signal eps = y;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double yhat = predict(theta, phi);
    eps[t] = y[t] - yhat;
    switch (config.structure()) {
      case Structure::kGarx:
        phi = regressor.step(u[t], y[t]);
        break;
      case Structure::kGarmax:
        phi = regressor.step(u[t], y[t], eps[t]);
        break;
      case Structure::kGoe:
        phi = regressor.step(u[t], yhat);
        break;
    }
  }
  return eps;
}

Signal equivalent_prediction_error(Scheme scheme, const PredictorConfig& config,
                                   const ParameterVector& theta, const Signal& u, const Signal& y,
                                   const std::optional<Signal>& noise) {
  require_scheme_matches(scheme, config);
  require_same_length(u, y, "equivalent_prediction_error");
  if (scheme == Scheme::kHRls) return prediction_error(config, theta, u, y);
  if (!noise) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} equivalent error needs the noise stream", to_string(scheme)));
  }
  require_same_length(u, *noise, "equivalent_prediction_error");
  const Signal bu = gobf_filter(config, theta.n(), false, u);
  if (scheme == Scheme::kHErls) {
    const Signal ay = gobf_filter(config, theta.m(), true, y);
    const Signal le = gobf_filter(config, theta.l(), false, *noise);
    Signal out = combine(ay, 1.0, bu, -1.0);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] -= le[t];
    return out;
  }
  const Signal clean = combine(y, 1.0, *noise, -1.0);
  const Signal ay = gobf_filter(config, theta.m(), true, clean);
  Signal out = combine(ay, 1.0, bu, -1.0);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] += (*noise)[t];
  return out;
}

Signal equivalent_prediction_error(Scheme scheme, const PredictorConfig& config,
                                   const ParameterVector& theta, const LinearSystem& g,
                                   const std::optional<LinearSystem>& w, const Signal& u,
                                   const Signal& noise) {
  require_same_length(u, noise, "equivalent_prediction_error");
  Signal y = g.apply(u);
  const Signal shaped = w ? w->apply(noise) : noise;
  for (std::size_t t = 0; t < y.size(); ++t) y[t] += shaped[t];
  return equivalent_prediction_error(scheme, config, theta, u, y, noise);
}

double SpectralDensity::at(double w) const {
  if (omega.empty()) throw Error(ErrorCode::kInvalidArgument, "empty spectral density");
  if (w <= omega.front()) return density.front();
  if (w >= omega.back()) return density.back();
  const auto it = std::upper_bound(omega.begin(), omega.end(), w);
  const std::size_t i = static_cast<std::size_t>(it - omega.begin());
  const double f = (w - omega[i - 1]) / (omega[i] - omega[i - 1]);
  return density[i - 1] + f * (density[i] - density[i - 1]);
}

SpectralDensity estimate_spectrum(const Signal& x, const SpectrumOptions& options) {
  if (x.size() < 256) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("estimate_spectrum: {} samples, need at least 256", x.size()));
  }
  if (!(options.overlap >= 0.0 && options.overlap < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "estimate_spectrum: overlap must be in [0, 1)");
  }
  std::size_t len = std::max<std::size_t>(options.segment_length, 16);
  while (len > x.size()) len /= 2;
  const std::size_t hop = std::max<std::size_t>(1, static_cast<std::size_t>(len * (1.0 - options.overlap)));

  std::vector<double> window(len);
  double wsum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    window[i] = options.window == SpectralWindow::kHann
                    ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / len)
                    : 1.0;
    wsum += window[i] * window[i];
  }
  double* in = fftw_alloc_real(len);
  fftw_complex* spec = fftw_alloc_complex(len / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, spec, FFTW_ESTIMATE);

  SpectralDensity out;
  out.window = options.window == SpectralWindow::kHann ? "hann" : "rectangular";
  out.segment_length = len;
  out.overlap = options.overlap;
  out.omega.resize(len / 2);
  out.density.assign(len / 2, 0.0);
  for (std::size_t k = 1; k <= len / 2; ++k) out.omega[k - 1] = 2.0 * std::numbers::pi * k / len;
  for (std::size_t start = 0; start + len <= x.size(); start += hop) {
    for (std::size_t i = 0; i < len; ++i) in[i] = x[start + i] * window[i];
    fftw_execute(plan);
    for (std::size_t k = 1; k <= len / 2; ++k) {
      out.density[k - 1] += (spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1]) / wsum;
    }
    ++out.segments;
  }
  fftw_destroy_plan(plan);
  fftw_free(spec);
  fftw_free(in);
  for (double& d : out.density) d /= static_cast<double>(out.segments);
  return out;
}

std::vector<double> criterion_grid(std::size_t uniform, std::size_t logarithmic) {
  std::vector<double> grid;
  grid.reserve(uniform + logarithmic);
  for (std::size_t j = 0; j < uniform; ++j) {
    grid.push_back(std::numbers::pi * j / static_cast<double>(uniform - 1));
  }
  const double lo = std::log(1e-7);
  const double hi = std::log(std::numbers::pi);
  for (std::size_t j = 0; j < logarithmic; ++j) {
    grid.push_back(std::exp(lo + (hi - lo) * j / static_cast<double>(logarithmic - 1)));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

CriterionResult limit_criterion(Scheme scheme, const GobfModel& model, const CriterionInputs& in,
                                std::span<const double> grid) {
  require_scheme_matches(scheme, model.config());
  if (grid.size() < 2) throw Error(ErrorCode::kInvalidArgument, "criterion grid too small");
  const bool noise_term = scheme != Scheme::kHOloe && in.w && in.phi_ee;
  CriterionResult result;
  std::vector<double> f(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid[j];
    const cdouble a = model.a_over_ao(w);
    const cdouble b = model.b_over_ao(w);
    double value = std::norm(a * in.g(w) - b) * in.phi_uu(w);
    if (noise_term) {
      const cdouble c = scheme == Scheme::kHErls ? *model.c_over_ao(w) : cdouble{1.0, 0.0};
      value += std::norm(a * (*in.w)(w) - c) * (*in.phi_ee)(w);
    }
    if (!std::isfinite(value)) {
      ++result.flagged_points;
      value = 0.0;
    }
    f[j] = value;
  }
  double acc = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j) acc += 0.5 * (f[j] + f[j - 1]) * (grid[j] - grid[j - 1]);
  result.value = acc / std::numbers::pi;
  return result;
}

CriterionResult limit_criterion(Scheme scheme, const GobfModel& model, const CriterionInputs& in) {
  const auto grid = criterion_grid();
  return limit_criterion(scheme, model, in, grid);
}

BandFitReport band_fit(const FrequencyFunction& g, const FrequencyFunction& g_hat,
                       const std::vector<std::pair<double, double>>& bands,
                       std::size_t points_per_band) {
  if (points_per_band < 2) throw Error(ErrorCode::kInvalidArgument, "band_fit: need >= 2 points");
  auto sorted = bands;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto [lo, hi] = sorted[i];
    if (!(lo > 0.0 && lo < hi && hi <= std::numbers::pi + 1e-12)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("band [{}, {}] is not inside (0, pi]", lo, hi));
    }
    if (i > 0 && lo < sorted[i - 1].second) {
      throw Error(ErrorCode::kInvalidArgument, "bands overlap");
    }
  }
  BandFitReport report;
  for (const auto& [lo, hi] : bands) {
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    double acc = 0.0;
    for (std::size_t j = 0; j < points_per_band; ++j) {
      const double w = std::exp(llo + (lhi - llo) * j / static_cast<double>(points_per_band - 1));
      acc += std::abs(std::log10(std::abs(g(w))) - std::log10(std::abs(g_hat(w))));
    }
    report.bands.push_back({lo, hi, acc / static_cast<double>(points_per_band)});
  }
  return report;
}

}  // namespace gobf
