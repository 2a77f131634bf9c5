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

#include "gobf/hambo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace gobf {

double HamboSignal::energy() const {
  double e = 0.0;
  for (const auto& c : coefficients) e += c.squaredNorm();
  return e;
}

Eigen::VectorXcd HamboSignal::evaluate(cdouble lambda) const {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(eta_p);
  const cdouble inv = 1.0 / lambda;
  cdouble power = 1.0;
  for (const auto& c : coefficients) {
    acc += c.cast<cdouble>() * power;
    power *= inv;
  }
  return acc;
}

HamboSignal hambo_signal_transform(const BasisSpec& spec, const Signal& y, int K) {
  if (K < 1) throw Error(ErrorCode::kInvalidArgument, "hambo_signal_transform: K must be >= 1");
  if (!y.is_finite()) throw Error(ErrorCode::kInvalidArgument, "hambo_signal_transform: non-finite signal");
  const auto realization = balanced_realization(spec);
  const int np = spec.eta_p();
  HamboSignal out;
  out.eta_p = np;
  out.coefficients.assign(K, Eigen::VectorXd::Zero(np));
  // Correlate y with the impulse responses of a K-section bank, streaming.
  FilterBank bank(realization, K);
  for (std::size_t t = 0; t < y.size(); ++t) {
    const auto o = bank.outputs();
    if (y[t] != 0.0) {
      for (int k = 0; k < K; ++k) {
        for (int i = 0; i < np; ++i) out.coefficients[k](i) += o[k * np + i] * y[t];
      }
    }
    bank.push(t == 0 ? 1.0 : 0.0);
  }
  // Residual energy not captured by the first K coefficients; exact for a
  // finitely supported y since the basis is complete on t >= 1.
  double signal_energy = 0.0;
  for (std::size_t t = 1; t < y.size(); ++t) signal_energy += y[t] * y[t];
  out.tail_bound = std::max(0.0, signal_energy - out.energy());
  return out;
}

Eigen::MatrixXcd hambo_operator_transform(const BalancedAllPass& realization,
                                          const ShiftDomainFunction& h, cdouble lambda) {
  const int np = realization.order();
  const cdouble gap = lambda - realization.D;
  if (std::abs(gap) == 0.0) {
    throw Error(ErrorCode::kNumerical, fmt::format("operator transform: lambda = {}{:+}i equals D",
                                                   lambda.real(), lambda.imag()));
  }
  const Eigen::MatrixXcd n_lambda =
      realization.A.cast<cdouble>() +
      realization.B.cast<cdouble>() * realization.C.cast<cdouble>() / gap;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(n_lambda, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, fmt::format("operator transform: eigen solve failed at lambda = {}{:+}i",
                                                   lambda.real(), lambda.imag()));
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(np, np);
  for (int k = 0; k < np; ++k) {
    const cdouble z = solver.eigenvalues()(k);
    const Eigen::VectorXcd v = realization.input_to_state(z);
    const Eigen::VectorXcd w = realization.input_to_state(1.0 / z);
    const cdouble norm = (v.transpose() * w)(0);
    if (!(std::abs(norm) > 1e-12 * v.norm() * w.norm())) {
      throw Error(ErrorCode::kNumerical,
                  fmt::format("operator transform: vanishing normalizer at lambda = {}{:+}i",
                              lambda.real(), lambda.imag()));
    }
    acc += h(z) * (v * w.transpose()) / norm;
  }
  return acc;
}

Eigen::MatrixXcd hambo_operator_transform(const BasisSpec& spec, const RationalModel& h,
                                          cdouble lambda) {
  if (!h.is_stable()) {
    throw Error(ErrorCode::kInstability, "operator transform: H must be stable");
  }
  const auto realization = balanced_realization(spec);
  return hambo_operator_transform(
      realization, [&h](cdouble w) { return h.numerator.eval(w) / h.denominator.eval(w); }, lambda);
}

std::vector<cdouble> validation_lambdas(const BalancedAllPass& realization,
                                        const ShiftDomainFunction& h, int count, double offset) {
  std::vector<cdouble> out;
  for (int j = 0; j < count; ++j) {
    double angle = offset + 2.0 * std::numbers::pi * j / count;
    for (int attempt = 0;; ++attempt) {
      const cdouble lambda = std::polar(1.0, angle);
      try {
        (void)hambo_operator_transform(realization, h, lambda);
        out.push_back(lambda);
        break;
      } catch (const Error&) {
        if (attempt >= 8) throw;
        angle += 1e-3;
      }
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> fir_hambo_coefficients(const BasisSpec& spec,
                                                    std::span<const double> m_blocks) {
  const int np = spec.eta_p();
  if (m_blocks.empty() || m_blocks.size() % static_cast<std::size_t>(np) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "fir_hambo_coefficients: blocks must be eta_p-sized");
  }
  const int n = static_cast<int>(m_blocks.size()) / np;
  const auto realization = balanced_realization(spec);
  const ShiftDomainFunction h = [&](cdouble w) {
    return 1.0 + basis_combination(realization, m_blocks, 1.0 / w);
  };
  // Coefficients of a polynomial in lambda^-1 of degree n from an inverse DFT
  // over N > n points; a rotated grid keeps the inversion exact.
  const int N = std::max(8, 2 * (n + 1));
  double offset = 0.0;
  std::vector<Eigen::MatrixXcd> samples;
  for (int attempt = 0; samples.empty(); ++attempt) {
    try {
      for (int j = 0; j < N; ++j) {
        samples.push_back(hambo_operator_transform(
            realization, h, std::polar(1.0, offset + 2.0 * std::numbers::pi * j / N)));
      }
    } catch (const Error&) {
      if (attempt >= 8) throw;
      samples.clear();
      offset += 1e-3;
    }
  }
  std::vector<Eigen::MatrixXd> coeffs;
  double scale = 1.0;
  for (int tau = 0; tau < N; ++tau) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(np, np);
    for (int j = 0; j < N; ++j) {
      acc += samples[j] * std::polar(1.0, tau * (offset + 2.0 * std::numbers::pi * j / N));
    }
    acc /= static_cast<double>(N);
    if (tau <= n) {
      scale = std::max(scale, acc.cwiseAbs().maxCoeff());
      if (acc.imag().cwiseAbs().maxCoeff() > 1e-8 * scale) {
        throw Error(ErrorCode::kConsistency, "fir_hambo_coefficients: complex coefficient");
      }
      coeffs.push_back(acc.real());
    } else if (acc.cwiseAbs().maxCoeff() > 1e-8 * scale) {
      throw Error(ErrorCode::kConsistency,
                  fmt::format("fir_hambo_coefficients: nonzero lambda^-{} term", tau));
    }
  }
  for (const auto& lambda : validation_lambdas(realization, h, 8, std::numbers::pi / 8.0 + 0.01)) {
    Eigen::MatrixXcd poly = Eigen::MatrixXcd::Zero(np, np);
    cdouble power = 1.0;
    for (const auto& c : coeffs) {
      poly += c.cast<cdouble>() * power;
      power /= lambda;
    }
    const double err = (poly - hambo_operator_transform(realization, h, lambda)).cwiseAbs().maxCoeff();
    if (err > 1e-8 * scale) {
      throw Error(ErrorCode::kConsistency,
                  fmt::format("fir_hambo_coefficients: mismatch {:.3e} at validation point", err));
    }
  }
  return coeffs;
}

}  // namespace gobf
