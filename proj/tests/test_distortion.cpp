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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "gobf/distortion.hpp"

using namespace gobf;

namespace {

constexpr double kPi = std::numbers::pi;

struct GridShape {
  std::optional<double> omega_max;  ///< first interior local maximum
  bool interior_min;                ///< a local minimum after it
};

// Local extrema of chi on [0, pi[ from a dense log grid.
GridShape grid_shape(cdouble p, std::size_t n = 200000) {
  std::vector<double> w(n), c(n);
  const double lo = std::log(1e-7), hi = std::log(kPi);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp(lo + (hi - lo) * i / (n - 1));
    c[i] = chi(p, w[i]);
  }
  GridShape g{std::nullopt, false};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!g.omega_max && c[i] > c[i - 1] && c[i] >= c[i + 1]) g.omega_max = w[i];
    if (g.omega_max && c[i] < c[i - 1] && c[i] <= c[i + 1]) g.interior_min = true;
  }
  return g;
}

// beta' as minus the derivative of the unwrapped phase of G_b(e^{i omega}).
double phase_slope(const BasisSpec& spec, double w) {
  const double h = 1e-6;
  const cdouble a = blaschke_eval(spec, std::polar(1.0, -(w - h)));
  const cdouble b = blaschke_eval(spec, std::polar(1.0, -(w + h)));
  return -std::arg(b / a) / (2.0 * h);
}

}  // namespace

TEST_CASE("pole_to_modal examples") {
  const auto m1 = pole_to_modal(cdouble(0.9996, 0.0));
  CHECK(m1.zeta == doctest::Approx(1.0));
  CHECK(m1.omega_o == doctest::Approx(-std::log(0.9996)).epsilon(1e-12));
  const auto m2 = pole_to_modal(std::exp(-0.1) * std::polar(1.0, 0.1));
  CHECK(m2.zeta == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(m2.omega_o == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-12));
  const auto m3 = pole_to_modal(cdouble(0.6, 0.0));
  CHECK(m3.omega_o == doctest::Approx(0.5108256).epsilon(1e-6));
  CHECK_THROWS_AS(pole_to_modal(cdouble(0.0, 0.0)), Error);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 100; ++i) {
    const cdouble p = std::polar(u(rng), kPi * u(rng));
    CHECK(std::abs(pole_to_modal(p).pole() - p) < 1e-12);
  }
}

TEST_CASE("beta_prime examples and kernel identity") {
  const auto delay = validate_basis({cdouble{0.0, 0.0}});
  CHECK(beta_prime(delay, 1.234) == doctest::Approx(1.0));
  const auto half = validate_basis({cdouble{0.5, 0.0}});
  CHECK(beta_prime(half, 0.0) == doctest::Approx(3.0));
  CHECK(beta_prime(half, kPi) == doctest::Approx(1.0 / 3.0));

  const auto spec = validate_basis({cdouble{0.8, 0.4}, cdouble{0.8, -0.4}, cdouble{-0.6, 0.0}});
  const auto r = balanced_realization(spec);
  for (int j = 0; j < 1024; ++j) {
    const double w = kPi * (j + 0.5) / 1024.0;
    const cdouble z = std::polar(1.0, w);
    const cdouble k = (r.input_to_state(z).transpose() * r.input_to_state(1.0 / z))(0);
    CHECK(std::abs(k - beta_prime(spec, w)) < 1e-10);
    CHECK(beta_prime(spec, w) > 0.0);
    CHECK(beta_prime(spec, -w) == doctest::Approx(beta_prime(spec, w)).epsilon(1e-14));
  }
  for (double w : {0.05, 0.7, 2.0}) {
    CHECK(beta_prime(spec, w) == doctest::Approx(phase_slope(spec, w)).epsilon(1e-6));
  }
}

TEST_CASE("chi examples") {
  const auto delay = validate_basis({cdouble{0.0, 0.0}});
  CHECK(chi(delay, kPi) == doctest::Approx(1.0));
  CHECK(chi(delay, kPi / 2) == doctest::Approx(0.5));
  const auto half = validate_basis({cdouble{0.5, 0.0}});
  const double denom = std::norm(1.0 - 0.5 * std::polar(1.0, 0.2));
  CHECK(chi(half, 0.2) == doctest::Approx(0.2 / kPi * 0.75 / denom).epsilon(1e-14));
  CHECK(chi(half, 0.2) == doctest::Approx(0.176882).epsilon(1e-5));
}

TEST_CASE("beta is strictly increasing") {
  const auto spec = validate_basis({cdouble{0.95, 0.0}, cdouble{0.3, 0.5}, cdouble{0.3, -0.5}});
  double acc = 0.0, prev = beta_prime(spec, 0.0);
  for (int j = 1; j <= 4000; ++j) {
    const double cur = beta_prime(spec, kPi * j / 4000.0);
    const double next = acc + 0.5 * (prev + cur) * kPi / 4000.0;
    CHECK(next > acc);
    acc = next;
    prev = cur;
  }
}

TEST_CASE("chi conservation") {
  const auto c0 = chi_conservation(validate_basis({cdouble{0.0, 0.0}}));
  CHECK(c0.normalized == doctest::Approx(1.0).epsilon(1e-12));
  const auto c1 = chi_conservation(validate_basis({cdouble{0.99, 0.0}}));
  CHECK(std::abs(c1.normalized - 1.0) < 1e-6);
  const auto c2 = chi_conservation(validate_basis({cdouble{0.6, 0.0}, cdouble{0.9996, 0.0}}));
  CHECK(std::abs(c2.raw - 2.0) < 2e-6);
  CHECK(std::abs(c2.normalized - 1.0) < 1e-6);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const cdouble p = std::polar(0.999 * std::sqrt(u(rng)), kPi * u(rng));
    const auto spec = validate_basis({p, std::conj(p), cdouble(0.999 * (2 * u(rng) - 1), 0.0)});
    CHECK(std::abs(chi_conservation(spec).normalized - 1.0) < 1e-6);
  }
}

TEST_CASE("chi extrema examples") {
  CHECK(real_pole_threshold() == doctest::Approx((kPi - std::sqrt(kPi * kPi - 4.0)) / 2.0));
  CHECK(real_pole_threshold() == doctest::Approx(0.3594).epsilon(1e-4));

  const auto r02 = chi_extrema(cdouble(0.2, 0.0));
  CHECK(r02.classification == ChiShape::kIncreasingMaxAtPi);
  CHECK(r02.omega_max == kPi);
  CHECK(r02.real_pole_condition == false);

  const auto r09 = chi_extrema(cdouble(0.9, 0.0));
  CHECK(r09.classification == ChiShape::kInteriorMaxAndMin);
  CHECK(r09.omega_min.has_value());
  CHECK(r09.real_pole_condition == true);

  for (double p : {0.99, 0.999, 0.9996}) {
    const auto r = chi_extrema(cdouble(p, 0.0));
    const double wo = -std::log(p);
    CHECK(std::abs(r.omega_max - wo) / wo <= 0.05);
    const auto g = grid_shape(cdouble(p, 0.0));
    REQUIRE(g.omega_max.has_value());
    CHECK(std::abs(r.omega_max - *g.omega_max) / wo < 1e-3);
  }
}

TEST_CASE("chi extrema predicates agree with a dense grid") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.01, 0.995);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = u(rng);
    const auto r = chi_extrema(cdouble(p, 0.0));
    const auto g = grid_shape(cdouble(p, 0.0), 20000);
    CHECK(r.hypothesis_holds);
    const bool increasing = !g.omega_max.has_value();
    CHECK((r.classification == ChiShape::kIncreasingMaxAtPi) == increasing);
    CHECK((r.classification == ChiShape::kInteriorMaxAndMin) == g.interior_min);
    CHECK(*r.real_pole_condition == !increasing);
    if (g.omega_max) CHECK(std::abs(r.omega_max - *g.omega_max) / *g.omega_max < 2e-3);
  }
}

TEST_CASE("multi-pole chi maxima") {
  const auto spec = validate_basis({cdouble{0.6, 0.0}, cdouble{0.9996, 0.0}});
  const auto maxima = chi_local_maxima(spec);
  REQUIRE(!maxima.empty());
  CHECK(std::abs(maxima.front() - 4.0e-4) / 4.0e-4 < 0.05);
}
