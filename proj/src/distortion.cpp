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

#include "gobf/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

namespace gobf {

namespace {

constexpr double kPi = std::numbers::pi;

// g(omega) written to avoid cancellation near omega = sigma, rho = 1.
double chi_slope_sign(double rho, double sigma, double omega) {
  const double half = std::sin(0.5 * (omega - sigma));
  return (1.0 - rho) * (1.0 - rho) / (2.0 * rho) + 2.0 * half * half -
         omega * std::sin(omega - sigma);
}

double refine_root(double rho, double sigma, double lo, double hi) {
  auto g = [&](double w) { return chi_slope_sign(rho, sigma, w); };
  std::uintmax_t iters = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-10 * std::max(1e-6, std::abs(a)); };
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double ModalPole::rho() const { return std::exp(-zeta * omega_o); }
double ModalPole::sigma() const { return std::sqrt(std::max(0.0, 1.0 - zeta * zeta)) * omega_o; }
cdouble ModalPole::pole() const { return std::polar(rho(), sigma()); }

ModalPole pole_to_modal(cdouble p) {
  const double r = std::abs(p);
  if (!(r > 0.0) || !(r < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pole_to_modal: requires 0 < |p| < 1 (the delay basis has no modal frequency)");
  }
  if (p.imag() < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "pole_to_modal: expects the upper-half-plane member");
  }
  const double log_r = std::log(r);
  const double angle = std::arg(p);
  ModalPole m;
  m.omega_o = std::hypot(log_r, angle);
  m.zeta = -log_r / m.omega_o;
  return m;
}

double beta_prime(cdouble pole, double omega) {
  const double num = (1.0 - std::abs(pole)) * (1.0 + std::abs(pole));
  return num / std::norm(1.0 - std::conj(pole) * std::polar(1.0, omega));
}

double beta_prime(const BasisSpec& spec, double omega) {
  double acc = 0.0;
  for (const auto& p : spec.poles()) acc += beta_prime(p, omega);
  return acc;
}

double chi(cdouble pole, double omega) { return omega * beta_prime(pole, omega) / kPi; }
double chi(const BasisSpec& spec, double omega) { return omega * beta_prime(spec, omega) / kPi; }

ConservationResult chi_conservation(const BasisSpec& spec) {
  std::vector<double> breaks{0.0, kPi};
  for (const auto& p : spec.poles()) {
    const double centre = std::abs(std::arg(p));
    const double width = std::max(1.0 - std::abs(p), 1e-12);
    breaks.push_back(centre);
    for (double w = width; w < kPi; w *= 2.0) {
      breaks.push_back(centre - w);
      breaks.push_back(centre + w);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double b) { return b < 0.0 || b > kPi; }),
               breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto f = [&spec](double w) { return beta_prime(spec, w) / kPi; };
  ConservationResult out;
  // Error is the gap between two Kronrod orders on the same segments.
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double hi = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, breaks[i], breaks[i + 1], 8);
    const double lo = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, breaks[i], breaks[i + 1], 8);
    out.raw += hi;
    out.error_estimate += std::abs(hi - lo);
  }
  if (!std::isfinite(out.raw) || out.error_estimate > 1e-8) {
    throw Error(ErrorCode::kNumerical,
                fmt::format("chi_conservation: quadrature did not converge (error {:.3e})", out.error_estimate));
  }
  out.normalized = out.raw / spec.eta_p();
  return out;
}

std::string_view to_string(ChiShape shape) {
  switch (shape) {
    case ChiShape::kIncreasingMaxAtPi: return "increasing-max-at-pi";
    case ChiShape::kInteriorMaximum: return "interior-maximum";
    case ChiShape::kInteriorMaxAndMin: return "interior-max-and-min";
  }
  return "unknown";
}

double real_pole_threshold() { return (kPi - std::sqrt(kPi * kPi - 4.0)) / 2.0; }

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> out(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) {
    out[i] = (i + 1 == points) ? hi : std::exp(a + (b - a) * i / (points - 1));
  }
  return out;
}

ChiExtremaReport chi_extrema(cdouble pole) {
  ChiExtremaReport report;
  report.modal = pole_to_modal(pole);
  const double wo = report.modal.omega_o;
  const double zeta = report.modal.zeta;
  const double rho = report.modal.rho();
  const double sigma = report.modal.sigma();

  // Predicates are written with cosh(zeta omega_o) = (1 + rho^2) / (2 rho).
  const double cosh_term = std::cosh(zeta * wo);
  report.hypothesis_holds = zeta * zeta >= 1.0 - kPi * kPi / (4.0 * wo * wo);
  report.increasing_condition = cosh_term - sigma >= kPi / 2.0;
  report.minimum_condition = cosh_term + std::cos(sigma) - kPi * std::sin(sigma) > 0.0;
  if (pole.imag() == 0.0) report.real_pole_condition = pole.real() > real_pole_threshold();

  // Sign changes of g on a log grid; + to - is a maximum of chi, - to + a minimum.
  std::vector<double> grid{0.0};
  const auto lg = log_grid(std::min(1e-9, 1e-3 * wo), kPi, 4096);
  grid.insert(grid.end(), lg.begin(), lg.end());
  std::optional<double> wmax, wmin;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double g0 = chi_slope_sign(rho, sigma, grid[i]);
    const double g1 = chi_slope_sign(rho, sigma, grid[i + 1]);
    if (!wmax && g0 > 0.0 && g1 <= 0.0) {
      wmax = refine_root(rho, sigma, grid[i], grid[i + 1]);
    } else if (wmax && !wmin && g0 < 0.0 && g1 >= 0.0) {
      wmin = refine_root(rho, sigma, grid[i], grid[i + 1]);
      break;
    }
  }
  report.omega_max = wmax.value_or(kPi);
  report.omega_min = wmin;

  if (report.hypothesis_holds) {
    if (report.increasing_condition) {
      report.classification = ChiShape::kIncreasingMaxAtPi;
      report.omega_max = kPi;
      report.omega_min.reset();
    } else if (report.minimum_condition) {
      report.classification = ChiShape::kInteriorMaxAndMin;
    } else {
      report.classification = ChiShape::kInteriorMaximum;
    }
  } else if (!wmax) {
    report.classification = ChiShape::kIncreasingMaxAtPi;
  } else {
    report.classification = wmin ? ChiShape::kInteriorMaxAndMin : ChiShape::kInteriorMaximum;
  }
  return report;
}

std::vector<double> chi_local_maxima(const BasisSpec& spec, int grid_points) {
  double lo = 1e-6;
  for (const auto& p : spec.poles()) {
    if (std::abs(p) > 0.0) lo = std::min(lo, 0.01 * (1.0 - std::abs(p)));
  }
  const auto grid = log_grid(lo, kPi, grid_points);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = chi(spec, grid[i]);
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) {
      auto neg = [&spec](double w) { return -chi(spec, w); };
      const auto r = boost::math::tools::brent_find_minima(neg, grid[i - 1], grid[i + 1], 50);
      out.push_back(r.first);
    }
  }
  if (values.back() > values[values.size() - 2]) out.push_back(kPi);
  return out;
}

}  // namespace gobf
