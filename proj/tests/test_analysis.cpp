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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gobf/analysis.hpp"

using namespace gobf;

namespace {

constexpr double kPi = std::numbers::pi;

PredictorConfig make(Structure s, std::vector<cdouble> poles, int eta_a) {
  return PredictorConfig(s, validate_basis(poles), eta_a);
}

// Small random parameter vector whose monic groups have stable zeros.
ParameterVector stable_theta(const PredictorConfig& c, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  for (;;) {
    Eigen::VectorXd v(c.dimension());
    for (auto& x : v) x = g(rng);
    ParameterVector p(c, v);
    bool ok = true;
    for (const auto& z : gobf_monic_zeros(c, p.m())) ok = ok && std::abs(z) < 0.9;
    if (c.structure() == Structure::kGarmax) {
      for (const auto& z : gobf_monic_zeros(c, p.l())) ok = ok && std::abs(z) < 0.9;
    }
    if (ok) return p;
  }
}

double max_abs_diff(const Signal& a, const Signal& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) m = std::max(m, std::abs(a[t] - b[t]));
  return m;
}

double variance(const Signal& x, std::size_t skip) {
  double s = 0.0, s2 = 0.0;
  const double n = static_cast<double>(x.size() - skip);
  for (std::size_t t = skip; t < x.size(); ++t) {
    s += x[t];
    s2 += x[t] * x[t];
  }
  return s2 / n - (s / n) * (s / n);
}

}  // namespace

TEST_CASE("gobf_filter equals the polynomial filter X/A_o") {
  const auto c = make(Structure::kGoe, {cdouble{0.6, 0.2}, cdouble{0.6, -0.2}}, 4);
  const Signal x = white_noise({1.0, 3}, 300);
  const std::vector<double> blocks{0.3, -0.2, 0.1, 0.05};
  const auto a_o = characteristic_poly_ao(c.spec(), 4);
  for (bool monic : {false, true}) {
    const auto expected = filter(gobf_numerator(c, blocks, monic), a_o, x);
    CHECK(max_abs_diff(gobf_filter(c, blocks, monic, x), expected) < 1e-10);
  }
  CHECK_THROWS_AS(gobf_filter(c, std::vector<double>{1.0}, true, x), Error);
}

TEST_CASE("H-RLS equivalent error is the prediction error") {
  const auto c = make(Structure::kGarx, {cdouble{0.7, 0.0}}, 3);
  const auto theta = stable_theta(c, 5, 0.3);
  const Signal u = prbs(9, 400);
  const Signal y = white_noise({1.0, 6}, 400);
  const Signal eps = prediction_error(c, theta, u, y);
  const Signal eq = equivalent_prediction_error(Scheme::kHRls, c, theta, u, y, std::nullopt);
  CHECK(eq.samples == eps.samples);
  // For GARX the predictor error is A^/A_o y - B^/A_o u.
  Signal manual = gobf_filter(c, theta.m(), true, y);
  const Signal bu = gobf_filter(c, theta.n(), false, u);
  for (std::size_t t = 0; t < manual.size(); ++t) manual[t] -= bu[t];
  CHECK(max_abs_diff(manual, eps) < 1e-12);
}

TEST_CASE("in-model equivalent errors reduce to the noise") {
  const Signal u = prbs(10, 1000);
  const Signal e = white_noise({0.2, 7}, 1000);
  SUBCASE("H-ERLS") {
    const auto c = make(Structure::kGarmax, {cdouble{0.5, 0.0}, cdouble{0.8, 0.0}}, 4);
    const auto theta = stable_theta(c, 8, 0.2);
    const auto m = gobf_to_rational(theta, c);
    const LinearSystem g(RationalModel(m.numerator, m.denominator));
    const LinearSystem w(RationalModel(*m.noise_numerator, m.denominator));
    const auto eq = equivalent_prediction_error(Scheme::kHErls, c, theta, g, w, u, e);
    CHECK(max_abs_diff(eq, e) < 1e-9);
  }
  SUBCASE("H-OLOE") {
    const auto c = make(Structure::kGoe, {cdouble{0.3, 0.4}, cdouble{0.3, -0.4}}, 2);
    const auto theta = stable_theta(c, 9, 0.3);
    const auto m = gobf_to_rational(theta, c);
    const LinearSystem g(RationalModel(m.numerator, m.denominator));
    const auto eq = equivalent_prediction_error(Scheme::kHOloe, c, theta, g, std::nullopt, u, e);
    CHECK(max_abs_diff(eq, e) < 1e-9);
  }
}

TEST_CASE("H-ERLS equivalent error for a noise impulse") {
  const auto c = make(Structure::kGarmax, {cdouble{0.4, 0.0}}, 2);
  const auto theta = stable_theta(c, 10, 0.3);
  const auto m = gobf_to_rational(theta, c);
  const Polynomial a{1.0, -0.5};
  const Polynomial cw{1.0, 0.3};
  const std::size_t n = 80;
  const Signal u(std::vector<double>(n, 0.0));
  const Signal delta = impulse(n);
  const auto eq = equivalent_prediction_error(Scheme::kHErls, c, theta, LinearSystem(RationalModel(Polynomial{0.0}, a)),
                                              LinearSystem(RationalModel(cw, a)), u, delta);
  // (A^/A_o)(W - C^/A^) delta + delta = (A^ C - C^ A)/(A_o A) delta + delta.
  const auto a_o = characteristic_poly_ao(c.spec(), 2);
  const Polynomial num = m.denominator * cw + scale(*m.noise_numerator * a, -1.0);
  Signal oracle = filter(num, a_o * a, delta);
  oracle[0] += 1.0;
  CHECK(max_abs_diff(eq, oracle) < 1e-12);
}

TEST_CASE("equivalent error argument checks") {
  const auto c = make(Structure::kGarmax, {cdouble{0.4, 0.0}}, 1);
  const ParameterVector theta(c);
  const Signal u = prbs(8, 50);
  CHECK_THROWS_AS(equivalent_prediction_error(Scheme::kHErls, c, theta, u, u, std::nullopt), Error);
  CHECK_THROWS_AS(equivalent_prediction_error(Scheme::kHOloe, c, theta, u, u, u), Error);
  CHECK_THROWS_AS(equivalent_prediction_error(Scheme::kHErls, c, theta, u, Signal(std::vector<double>(3)), u), Error);
}

TEST_CASE("limit criterion vanishes for a matched model") {
  const auto c = make(Structure::kGarmax, {cdouble{0.6, 0.3}, cdouble{0.6, -0.3}}, 4);
  const GobfModel model(c, stable_theta(c, 11, 0.2));
  CriterionInputs in{[&](double w) { return model.response(w); },
                     [&](double w) { return *model.noise_response(w); },
                     [](double) { return 1.0; },
                     [](double) { return 0.5; }};
  const auto r = limit_criterion(Scheme::kHErls, model, in);
  CHECK(r.value < 1e-20);
  CHECK(r.flagged_points == 0);
  CHECK_THROWS_AS(limit_criterion(Scheme::kHOloe, model, in), Error);
}

TEST_CASE("H-OLOE criterion is linear in a flat input spectrum") {
  const auto c = make(Structure::kGoe, {cdouble{0.5, 0.0}}, 2);
  const GobfModel model(c, stable_theta(c, 12, 0.3));
  const RationalModel g(Polynomial{0.0, 1.0}, Polynomial{1.0, -0.9});
  auto value = [&](double level) {
    return limit_criterion(Scheme::kHOloe, model,
                           {[&](double w) { return g.response(w); }, std::nullopt,
                            [level](double) { return level; }, std::nullopt})
        .value;
  };
  const double base = value(1.0);
  CHECK(base > 0.0);
  CHECK(value(3.5) == doctest::Approx(3.5 * base).epsilon(1e-13));
}

TEST_CASE("limit criterion agrees with the equivalent-error variance") {
  // Reduced-order H-OLOE model of a third-order plant, white input and noise.
  const RationalModel plant(Polynomial{0.0, 0.4, 0.2, 0.1}, Polynomial{1.0, -1.1, 0.5, -0.1});
  const auto c = make(Structure::kGoe, {cdouble{0.5, 0.0}}, 2);
  const auto theta = stable_theta(c, 13, 0.3);
  const GobfModel model(c, theta);
  const double su = 1.0, sv = 0.3;
  const std::size_t n = 400000;
  const Signal u = white_noise({su, 14}, n);
  const Signal v = white_noise({sv, 15}, n);
  const auto eq = equivalent_prediction_error(Scheme::kHOloe, c, theta, LinearSystem(plant), std::nullopt, u, v);
  const auto crit = limit_criterion(Scheme::kHOloe, model,
                                    {[&](double w) { return plant.response(w); }, std::nullopt,
                                     [su](double) { return su * su; }, std::nullopt});
  CHECK(variance(eq, 200) == doctest::Approx(crit.value + sv * sv).epsilon(0.02));
}

TEST_CASE("criterion grid") {
  const auto g = criterion_grid();
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(1e-7));
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
  CHECK(g.size() > 8000);
}

TEST_CASE("spectrum of white noise") {
  const double s = 2.0;
  const Signal x = white_noise({s, 21}, 1 << 20);
  const auto d = estimate_spectrum(x, {1024, 0.5});
  CHECK(d.segment_length == 1024);
  CHECK(d.omega.size() == 512);
  CHECK(d.omega.front() == doctest::Approx(2.0 * kPi / 1024));
  CHECK(d.omega.back() == doctest::Approx(kPi));
  CHECK(d.window == "hann");
  double mean_level = 0.0, worst = 0.0;
  for (double v : d.density) {
    CHECK(v >= 0.0);
    mean_level += v / d.density.size();
    worst = std::max(worst, std::abs(v / (s * s) - 1.0));
  }
  CHECK(mean_level == doctest::Approx(s * s).epsilon(0.01));
  CHECK(worst < 0.15);
}

TEST_CASE("spectrum of a sinusoid has one dominant bin") {
  const std::size_t len = 512, k0 = 37;
  std::vector<double> x(len * 16);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::sin(2.0 * kPi * k0 * t / len);
  const auto d = estimate_spectrum(Signal(x), {len, 0.5});
  const auto top = std::max_element(d.density.begin(), d.density.end()) - d.density.begin();
  CHECK(d.omega[top] == doctest::Approx(2.0 * kPi * k0 / len));
  for (std::size_t k = 0; k < d.density.size(); ++k) {
    if (std::abs(static_cast<long>(k) - top) > 1) CHECK(d.density[k] < 1e-12 * d.density[top]);
  }
}

TEST_CASE("spectrum of a full-period PRBS is flat") {
  const int registers = 10;
  const std::size_t period = (1u << registers) - 1;
  const Signal x = prbs(registers, period * 64);
  const auto d = estimate_spectrum(x, {period, 0.0, SpectralWindow::kRectangular});
  CHECK(d.window == "rectangular");
  const double level = 1.0 + 1.0 / period;
  double worst = 0.0;
  for (double v : d.density) worst = std::max(worst, std::abs(v / level - 1.0));
  CHECK(worst < 0.1);
}

TEST_CASE("spectrum argument checks and interpolation") {
  CHECK_THROWS_AS(estimate_spectrum(Signal(std::vector<double>(100))), Error);
  CHECK_THROWS_AS(estimate_spectrum(white_noise({1.0, 1}, 1000), {256, 1.0}), Error);
  SpectralDensity d;
  d.omega = {1.0, 2.0};
  d.density = {3.0, 5.0};
  CHECK(d.at(1.5) == doctest::Approx(4.0));
  CHECK(d.at(0.1) == 3.0);
  CHECK(d.at(3.0) == 5.0);
  // Short signals fall back to the largest power-of-two segment that fits.
  CHECK(estimate_spectrum(white_noise({1.0, 2}, 3000)).segment_length == 2048);
}

TEST_CASE("band fit") {
  const RationalModel g(Polynomial{0.0, 0.2}, Polynomial{1.0, -1.5, 0.7});
  const FrequencyFunction gf = [&](double w) { return g.response(w); };
  const FrequencyFunction g10 = [&](double w) { return 10.0 * g.response(w); };
  const std::vector<std::pair<double, double>> bands{{1e-3, 0.1}, {0.2, kPi}};
  const auto same = band_fit(gf, gf, bands);
  REQUIRE(same.bands.size() == 2);
  CHECK(same.bands[0].error == 0.0);
  CHECK(same.bands[1].error == 0.0);
  const auto off = band_fit(gf, g10, bands);
  CHECK(off.bands[0].error == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(off.bands[1].error == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(off.bands[1].omega_hi == kPi);
  CHECK_THROWS_AS(band_fit(gf, gf, {{0.0, 1.0}}), Error);
  CHECK_THROWS_AS(band_fit(gf, gf, {{0.5, 4.0}}), Error);
  CHECK_THROWS_AS(band_fit(gf, gf, {{0.1, 1.0}, {0.5, 2.0}}), Error);
  CHECK_THROWS_AS(band_fit(gf, gf, {{0.5, 0.1}}), Error);
}
