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

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "gobf/error.hpp"

namespace gobf {

using cdouble = std::complex<double>;

/// Polynomial in the backward shift q^-1, ascending powers.
/// coefficients()[0] is the constant term.
class Polynomial {
 public:
  Polynomial() : coeffs_{1.0} {}
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs) : Polynomial(std::vector<double>(coeffs)) {}

  const std::vector<double>& coefficients() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0.0; }

  bool is_monic() const { return coeffs_[0] == 1.0; }

  /// Evaluates the polynomial with q^-1 replaced by `w`.
  cdouble eval(cdouble w) const;

  /// Roots in the z plane, i.e. zeros of z^n P(1/z). Requires a nonzero constant term.
  std::vector<cdouble> z_roots() const;
  /// Largest root modulus; 0 for a constant polynomial.
  double root_radius() const;
  bool is_stable() const { return root_radius() < 1.0; }

  /// Copy with trailing zeros removed (at least one coefficient kept).
  Polynomial trimmed() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

Polynomial multiply(const Polynomial& a, const Polynomial& b);
Polynomial add(const Polynomial& a, const Polynomial& b);
Polynomial scale(const Polynomial& a, double factor);
inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return multiply(a, b); }
inline Polynomial operator+(const Polynomial& a, const Polynomial& b) { return add(a, b); }

/// G = numerator / denominator, optionally with a noise model C / denominator.
struct RationalModel {
  Polynomial numerator{0.0};
  Polynomial denominator{1.0};
  std::optional<Polynomial> noise_numerator;

  RationalModel() = default;
  RationalModel(Polynomial num, Polynomial den, std::optional<Polynomial> noise = std::nullopt);

  bool is_stable() const { return denominator.is_stable(); }
  /// G(e^{i omega}); q^-1 is evaluated at e^{-i omega}.
  cdouble response(double omega) const;
  cdouble noise_response(double omega) const;
};

/// Biquad in q^-1: (b0 + b1 q^-1 + b2 q^-2) / (1 + a1 q^-1 + a2 q^-2).
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Cascade of second-order sections. Used where expanded polynomials are
/// too ill-conditioned to filter or evaluate (clustered poles near z = 1).
struct FactoredModel {
  double gain = 1.0;
  std::vector<Biquad> sections;

  cdouble response(double omega) const;
  RationalModel expanded() const;
  std::vector<cdouble> poles() const;
};

struct Signal {
  std::vector<double> samples;
  std::int64_t origin = 0;

  Signal() = default;
  explicit Signal(std::vector<double> s, std::int64_t origin_index = 0)
      : samples(std::move(s)), origin(origin_index) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double operator[](std::size_t i) const { return samples[i]; }
  double& operator[](std::size_t i) { return samples[i]; }
  bool is_finite() const;
};

Signal impulse(std::size_t length, std::size_t at = 0);
Signal step(std::size_t length);

struct NoiseSpec {
  double standard_deviation = 0.0;
  std::uint64_t seed = 0;
};

/// Centered Gaussian white noise: mt19937_64 uniforms through Box-Muller.
/// std::normal_distribution is implementation-defined, hence the explicit transform.
class GaussianNoise {
 public:
  explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

Signal white_noise(const NoiseSpec& spec, std::size_t length);

enum class NoiseMode { kEquationError, kOutputError };

struct SimulationResult {
  Signal y;
  Signal noise;  ///< e(t) or v(t); zeros when no noise was requested.
  bool unstable_denominator = false;
};

/// Zero-initial-state direct-form simulation. Equation-error mode applies
/// A y = B u + C e (C = 1 when the model has no noise numerator); output-error
/// mode returns B/A u + v.
SimulationResult simulate(const RationalModel& model, const Signal& u,
                          std::optional<std::pair<NoiseSpec, NoiseMode>> noise = std::nullopt);

/// Filters `x` through numerator/denominator with zero initial state.
Signal filter(const Polynomial& numerator, const Polynomial& denominator, const Signal& x);
Signal filter(const FactoredModel& model, const Signal& x);

/// Either representation behind one interface.
class LinearSystem {
 public:
  LinearSystem(RationalModel m) : impl_(std::move(m)) {}
  LinearSystem(FactoredModel m) : impl_(std::move(m)) {}

  cdouble response(double omega) const;
  Signal apply(const Signal& x) const;
  RationalModel rational() const;

 private:
  std::variant<RationalModel, FactoredModel> impl_;
};

/// Maximum-length sequence taking values +-amplitude, period 2^registers - 1.
Signal prbs(int registers, std::size_t length, double amplitude = 1.0);
/// Feedback taps (1-based register indices) used for a register count.
std::span<const int> prbs_taps(int registers);

double mean(std::span<const double> x);
double standard_deviation(std::span<const double> x);
/// Output noise level giving the requested SNR in dB, with
/// SNR = 20 log10(std(clean) / std(noise)).
double noise_std_for_snr(const Signal& clean, double snr_db);

}  // namespace gobf
