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

#include "gobf/lti.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace gobf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kInstability: return "instability";
    case ErrorCode::kRealness: return "realness";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kConsistency: return "consistency";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kSchema: return "schema";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "polynomial needs at least one coefficient");
  }
}

cdouble Polynomial::eval(cdouble w) const {
  // Horner from the highest power.
  cdouble acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
  return acc;
}

std::vector<cdouble> Polynomial::z_roots() const {
  const Polynomial p = trimmed();
  const std::size_t n = p.degree();
  if (n == 0) return {};
  if (p.coeffs_[0] == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "z_roots: constant term is zero");
  }
  // Companion matrix of z^n + (c1/c0) z^{n-1} + ... + cn/c0.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) companion(0, j) = -p.coeffs_[j + 1] / p.coeffs_[0];
  for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "z_roots: eigenvalue computation failed");
  }
  std::vector<cdouble> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = solver.eigenvalues()[i];
  return roots;
}

double Polynomial::root_radius() const {
  double r = 0.0;
  for (const auto& z : z_roots()) r = std::max(r, std::abs(z));
  return r;
}

Polynomial Polynomial::trimmed() const {
  std::size_t n = coeffs_.size();
  while (n > 1 && coeffs_[n - 1] == 0.0) --n;
  return Polynomial(std::vector<double>(coeffs_.begin(), coeffs_.begin() + n));
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  const auto& x = a.coefficients();
  const auto& y = b.coefficients();
  std::vector<double> out(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
  }
  return Polynomial(std::move(out)).trimmed();
}

Polynomial add(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Polynomial(std::move(out)).trimmed();
}

Polynomial scale(const Polynomial& a, double factor) {
  std::vector<double> out = a.coefficients();
  for (auto& c : out) c *= factor;
  return Polynomial(std::move(out)).trimmed();
}

// ---------------------------------------------------------------------------
// Models

RationalModel::RationalModel(Polynomial num, Polynomial den, std::optional<Polynomial> noise)
    : numerator(std::move(num)), denominator(std::move(den)), noise_numerator(std::move(noise)) {
  if (!denominator.is_monic()) {
    throw Error(ErrorCode::kInvalidArgument, "rational model denominator must be monic in q^-1");
  }
  if (noise_numerator && !noise_numerator->is_monic()) {
    throw Error(ErrorCode::kInvalidArgument, "noise numerator must be monic in q^-1");
  }
}

cdouble RationalModel::response(double omega) const {
  const cdouble w = std::polar(1.0, -omega);
  return numerator.eval(w) / denominator.eval(w);
}

cdouble RationalModel::noise_response(double omega) const {
  const cdouble w = std::polar(1.0, -omega);
  const cdouble c = noise_numerator ? noise_numerator->eval(w) : cdouble(1.0);
  return c / denominator.eval(w);
}

cdouble FactoredModel::response(double omega) const {
  const cdouble w = std::polar(1.0, -omega);
  cdouble acc = gain;
  for (const auto& s : sections) {
    acc *= (s.b0 + w * (s.b1 + w * s.b2)) / (1.0 + w * (s.a1 + w * s.a2));
  }
  return acc;
}

RationalModel FactoredModel::expanded() const {
  Polynomial num{gain};
  Polynomial den{1.0};
  for (const auto& s : sections) {
    num = num * Polynomial{s.b0, s.b1, s.b2};
    den = den * Polynomial{1.0, s.a1, s.a2};
  }
  return RationalModel(num, den);
}

std::vector<cdouble> FactoredModel::poles() const {
  std::vector<cdouble> out;
  for (const auto& s : sections) {
    const auto r = Polynomial{1.0, s.a1, s.a2}.z_roots();
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

bool Signal::is_finite() const {
  return std::all_of(samples.begin(), samples.end(), [](double v) { return std::isfinite(v); });
}

Signal impulse(std::size_t length, std::size_t at) {
  Signal s(std::vector<double>(length, 0.0));
  if (at < length) s[at] = 1.0;
  return s;
}

Signal step(std::size_t length) { return Signal(std::vector<double>(length, 1.0)); }

// ---------------------------------------------------------------------------
// Noise

double GaussianNoise::next() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  // 53-bit uniforms in (0, 1]; avoids log(0).
  constexpr double kScale = 1.0 / 9007199254740992.0;
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kScale;
  const double u2 = static_cast<double>(engine_() >> 11) * kScale;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

Signal white_noise(const NoiseSpec& spec, std::size_t length) {
  if (!(spec.standard_deviation >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise standard deviation must be >= 0");
  }
  GaussianNoise gen(spec.seed);
  Signal out{std::vector<double>(length)};
  for (auto& v : out.samples) v = spec.standard_deviation * gen.next();
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

Signal filter(const Polynomial& numerator, const Polynomial& denominator, const Signal& x) {
  const auto& b = numerator.coefficients();
  const auto& a = denominator.coefficients();
  if (a[0] == 0.0) throw Error(ErrorCode::kInvalidArgument, "filter: zero leading denominator");
  const std::size_t n = x.size();
  Signal y(std::vector<double>(n, 0.0), x.origin);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size() && i <= t; ++i) acc += b[i] * x[t - i];
    for (std::size_t i = 1; i < a.size() && i <= t; ++i) acc -= a[i] * y[t - i];
    y[t] = acc / a[0];
  }
  return y;
}

Signal filter(const FactoredModel& model, const Signal& x) {
  Signal y = x;
  for (auto& v : y.samples) v *= model.gain;
  for (const auto& s : model.sections) {
    // Direct form II transposed, one section at a time.
    double z1 = 0.0, z2 = 0.0;
    for (auto& v : y.samples) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

SimulationResult simulate(const RationalModel& model, const Signal& u,
                          std::optional<std::pair<NoiseSpec, NoiseMode>> noise) {
  if (u.empty()) throw Error(ErrorCode::kInvalidArgument, "simulate: empty input");
  if (!model.denominator.is_monic()) {
    throw Error(ErrorCode::kInvalidArgument, "simulate: denominator must be monic");
  }
  SimulationResult result;
  result.unstable_denominator = !model.denominator.is_stable();
  result.noise = noise ? white_noise(noise->first, u.size()) : Signal(std::vector<double>(u.size(), 0.0));
  result.y = filter(model.numerator, model.denominator, u);
  if (noise) {
    if (noise->second == NoiseMode::kEquationError) {
      const Polynomial c = model.noise_numerator.value_or(Polynomial{1.0});
      const Signal colored = filter(c, model.denominator, result.noise);
      for (std::size_t t = 0; t < u.size(); ++t) result.y[t] += colored[t];
    } else {
      for (std::size_t t = 0; t < u.size(); ++t) result.y[t] += result.noise[t];
    }
  }
  result.y.origin = u.origin;
  return result;
}

cdouble LinearSystem::response(double omega) const {
  return std::visit([omega](const auto& m) { return m.response(omega); }, impl_);
}

Signal LinearSystem::apply(const Signal& x) const {
  if (const auto* r = std::get_if<RationalModel>(&impl_)) {
    return filter(r->numerator, r->denominator, x);
  }
  return filter(std::get<FactoredModel>(impl_), x);
}

RationalModel LinearSystem::rational() const {
  if (const auto* r = std::get_if<RationalModel>(&impl_)) return *r;
  return std::get<FactoredModel>(impl_).expanded();
}

// ---------------------------------------------------------------------------
// PRBS

namespace {

// Primitive feedback polynomials for Fibonacci LFSRs, one per register count
// (Xilinx XAPP052 table). Index = register count.
const std::array<std::vector<int>, 33>& tap_table() {
  static const std::array<std::vector<int>, 33> table = {{
      {}, {}, {2, 1}, {3, 2}, {4, 3}, {5, 3}, {6, 5}, {7, 6}, {8, 6, 5, 4}, {9, 5}, {10, 7},
      {11, 9}, {12, 6, 4, 1}, {13, 4, 3, 1}, {14, 5, 3, 1}, {15, 14}, {16, 15, 13, 4},
      {17, 14}, {18, 11}, {19, 6, 2, 1}, {20, 17}, {21, 19}, {22, 21}, {23, 18},
      {24, 23, 22, 17}, {25, 22}, {26, 6, 2, 1}, {27, 5, 2, 1}, {28, 25}, {29, 27},
      {30, 6, 4, 1}, {31, 28}, {32, 22, 2, 1},
  }};
  return table;
}

}  // namespace

std::span<const int> prbs_taps(int registers) {
  if (registers < 2 || registers > 32) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("prbs: no primitive tap set stored for {} registers", registers));
  }
  return tap_table()[static_cast<std::size_t>(registers)];
}

Signal prbs(int registers, std::size_t length, double amplitude) {
  const auto taps = prbs_taps(registers);
  if (length == 0) throw Error(ErrorCode::kInvalidArgument, "prbs: length must be >= 1");
  // Bit i of `state` holds register i+1; all-ones start, output from the last register.
  std::uint64_t state = (1ULL << registers) - 1ULL;
  Signal out{std::vector<double>(length)};
  for (std::size_t t = 0; t < length; ++t) {
    const std::uint64_t msb = (state >> (registers - 1)) & 1ULL;
    out[t] = msb ? amplitude : -amplitude;
    std::uint64_t fb = 0;
    for (int tap : taps) fb ^= (state >> (tap - 1)) & 1ULL;
    state = ((state << 1) | fb) & ((1ULL << registers) - 1ULL);
  }
  return out;
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double standard_deviation(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double noise_std_for_snr(const Signal& clean, double snr_db) {
  return standard_deviation(clean.samples) / std::pow(10.0, snr_db / 20.0);
}

}  // namespace gobf
