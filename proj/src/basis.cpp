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

#include "gobf/basis.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace gobf {

namespace {

constexpr double kConjugateTol = 1e-12;

bool is_conjugate(cdouble a, cdouble b) {
  return std::abs(a - std::conj(b)) <= kConjugateTol * std::max(1.0, std::abs(a));
}

std::string pole_string(cdouble p) { return fmt::format("({}{:+}i)", p.real(), p.imag()); }

// Orthogonal 2x2 block [[p, s], [-s, p]] realizing (p z - 1) / (z - p).
BalancedAllPass real_section(double p) {
  const double s = std::sqrt((1.0 - p) * (1.0 + p));
  BalancedAllPass r;
  r.A = Eigen::MatrixXd::Constant(1, 1, p);
  r.B = Eigen::VectorXd::Constant(1, s);
  r.C = Eigen::RowVectorXd::Constant(1, -s);
  r.D = p;
  return r;
}

// Normalized two-rotation lattice for the pair (p, conj p):
// M = R01(c1, s1) * R12(c2, s2) with reflection coefficients
// k2 = |p|^2 and k1 = -2 Re p / (1 + |p|^2).
BalancedAllPass pair_section(cdouble p) {
  const double a1 = -2.0 * p.real();
  const double a2 = std::norm(p);
  const double k1 = a1 / (1.0 + a2);
  const double k2 = a2;
  const double c1 = -k1;
  const double s1 = std::sqrt((1.0 - k1) * (1.0 + k1));
  const double c2 = k2;
  const double s2 = std::sqrt((1.0 - k2) * (1.0 + k2));
  Eigen::Matrix3d r01 = Eigen::Matrix3d::Identity();
  r01(0, 0) = c1; r01(1, 1) = c1; r01(0, 1) = s1; r01(1, 0) = -s1;
  Eigen::Matrix3d r12 = Eigen::Matrix3d::Identity();
  r12(1, 1) = c2; r12(2, 2) = c2; r12(1, 2) = s2; r12(2, 1) = -s2;
  const Eigen::Matrix3d m = r01 * r12;
  BalancedAllPass r;
  r.A = m.topLeftCorner(2, 2);
  r.B = m.topRightCorner(2, 1);
  r.C = m.bottomLeftCorner(1, 2);
  r.D = m(2, 2);
  return r;
}

// Series connection: the output of `first` drives `second`.
BalancedAllPass cascade(const BalancedAllPass& first, const BalancedAllPass& second) {
  const int n1 = first.order();
  const int n2 = second.order();
  BalancedAllPass r;
  r.A = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  r.A.topLeftCorner(n1, n1) = first.A;
  r.A.bottomLeftCorner(n2, n1) = second.B * first.C;
  r.A.bottomRightCorner(n2, n2) = second.A;
  r.B.resize(n1 + n2);
  r.B << first.B, second.B * first.D;
  r.C.resize(n1 + n2);
  r.C << second.D * first.C, second.C;
  r.D = second.D * first.D;
  return r;
}

}  // namespace

double BasisSpec::max_modulus() const {
  double m = 0.0;
  for (const auto& p : poles_) m = std::max(m, std::abs(p));
  return m;
}

BasisSpec validate_basis(std::span<const cdouble> poles, bool complete_conjugates) {
  if (poles.empty()) throw Error(ErrorCode::kInvalidArgument, "basis needs at least one pole");
  std::vector<cdouble> out(poles.begin(), poles.end());
  for (const auto& p : out) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw Error(ErrorCode::kInvalidArgument, "basis pole is not finite");
    }
    if (std::abs(p) >= 1.0) {
      throw Error(ErrorCode::kInstability,
                  fmt::format("basis pole {} is not strictly inside the unit circle", pole_string(p)));
    }
  }
  // Greedy multiset matching of non-real poles against their conjugates.
  std::vector<bool> used(out.size(), false);
  std::vector<cdouble> completed;
  for (std::size_t i = 0; i < out.size(); ++i) {
    completed.push_back(out[i]);
    if (out[i].imag() == 0.0 || used[i]) continue;
    used[i] = true;
    bool found = false;
    for (std::size_t j = 0; j < out.size() && !found; ++j) {
      if (!used[j] && is_conjugate(out[i], out[j])) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) {
      if (!complete_conjugates) {
        throw Error(ErrorCode::kRealness,
                    fmt::format("basis pole {} has no conjugate partner", pole_string(out[i])));
      }
      completed.push_back(std::conj(out[i]));
    }
  }
  BasisSpec spec;
  spec.poles_ = complete_conjugates ? std::move(completed) : std::move(out);
  return spec;
}

BasisSpec validate_basis(std::initializer_list<cdouble> poles) {
  return validate_basis(std::span<const cdouble>(poles.begin(), poles.size()));
}

cdouble blaschke_eval(const BasisSpec& spec, cdouble z_inv) {
  cdouble acc = 1.0;
  for (const auto& p : spec.poles()) {
    const cdouble den = 1.0 - p * z_inv;
    if (std::abs(den) == 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("blaschke_eval: z^-1 = {} is a pole of the product", pole_string(z_inv)));
    }
    acc *= (p - z_inv) / den;
  }
  return acc;
}

Eigen::MatrixXd BalancedAllPass::system_matrix() const {
  const int n = order();
  Eigen::MatrixXd m(n + 1, n + 1);
  m.topLeftCorner(n, n) = A;
  m.topRightCorner(n, 1) = B;
  m.bottomLeftCorner(1, n) = C;
  m(n, n) = D;
  return m;
}

Eigen::VectorXcd BalancedAllPass::input_to_state(cdouble z) const {
  const int n = order();
  Eigen::MatrixXcd m = z * Eigen::MatrixXcd::Identity(n, n) - A.cast<cdouble>();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  if (!(std::abs(lu.determinant()) > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("z = {} is an eigenvalue of the basis state matrix", pole_string(z)));
  }
  return lu.solve(B.cast<cdouble>());
}

cdouble BalancedAllPass::transfer(cdouble z) const {
  return D + (C.cast<cdouble>() * input_to_state(z))(0);
}

BalancedAllPass balanced_realization(const BasisSpec& spec) {
  const auto& poles = spec.poles();
  std::vector<bool> used(poles.size(), false);
  std::optional<BalancedAllPass> acc;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    BalancedAllPass section;
    if (poles[i].imag() == 0.0) {
      section = real_section(poles[i].real());
    } else {
      for (std::size_t j = i + 1; j < poles.size(); ++j) {
        if (!used[j] && is_conjugate(poles[i], poles[j])) {
          used[j] = true;
          break;
        }
      }
      section = pair_section(poles[i]);
    }
    acc = acc ? cascade(*acc, section) : section;
  }
  return *acc;
}

Eigen::VectorXcd basis_response(const BalancedAllPass& realization, int k, cdouble z) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "basis_response: k must be >= 1");
  const Eigen::VectorXcd v1 = realization.input_to_state(z);
  const cdouble gb = realization.D + (realization.C.cast<cdouble>() * v1)(0);
  return v1 * std::pow(gb, k - 1);
}

Eigen::VectorXcd basis_response(const BasisSpec& spec, int k, cdouble z) {
  return basis_response(balanced_realization(spec), k, z);
}

cdouble basis_combination(const BalancedAllPass& realization, std::span<const double> blocks,
                          cdouble z) {
  const int np = realization.order();
  if (blocks.size() % static_cast<std::size_t>(np) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "basis_combination: block size mismatch");
  }
  const Eigen::VectorXcd v1 = realization.input_to_state(z);
  const cdouble gb = realization.D + (realization.C.cast<cdouble>() * v1)(0);
  cdouble acc = 0.0;
  cdouble power = 1.0;
  for (std::size_t k = 0; k * np < blocks.size(); ++k) {
    cdouble dot = 0.0;
    for (int i = 0; i < np; ++i) dot += blocks[k * np + i] * v1(i);
    acc += dot * power;
    power *= gb;
  }
  return acc;
}

FilterBank::FilterBank(const BalancedAllPass& realization, int n_sections)
    : eta_p_(realization.order()), n_sections_(n_sections), d_(realization.D) {
  if (n_sections < 1) throw Error(ErrorCode::kInvalidArgument, "filter bank needs >= 1 section");
  a_.resize(eta_p_ * eta_p_);
  b_.resize(eta_p_);
  c_.resize(eta_p_);
  for (int i = 0; i < eta_p_; ++i) {
    for (int j = 0; j < eta_p_; ++j) a_[i * eta_p_ + j] = realization.A(i, j);
    b_[i] = realization.B(i);
    c_[i] = realization.C(i);
  }
  state_.assign(dimension(), 0.0);
  scratch_.assign(eta_p_, 0.0);
}

void FilterBank::push(double s) {
  double drive = s;
  for (int j = 0; j < n_sections_; ++j) {
    double* x = state_.data() + j * eta_p_;
    // All-pass output from the current state, before the update.
    double out = d_ * drive;
    for (int i = 0; i < eta_p_; ++i) out += c_[i] * x[i];
    for (int i = 0; i < eta_p_; ++i) {
      double acc = b_[i] * drive;
      for (int k = 0; k < eta_p_; ++k) acc += a_[i * eta_p_ + k] * x[k];
      scratch_[i] = acc;
    }
    std::copy(scratch_.begin(), scratch_.end(), x);
    drive = out;
  }
}

void FilterBank::reset() { std::fill(state_.begin(), state_.end(), 0.0); }

std::vector<Eigen::VectorXd> filter_bank_run(const BalancedAllPass& realization, int n_sections,
                                             const Signal& s) {
  FilterBank bank(realization, n_sections);
  std::vector<Eigen::VectorXd> out;
  out.reserve(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    const auto o = bank.outputs();
    out.emplace_back(Eigen::Map<const Eigen::VectorXd>(o.data(), static_cast<Eigen::Index>(o.size())));
    bank.push(s[t]);
  }
  return out;
}

std::vector<Eigen::MatrixXd> basis_impulse_responses(const BalancedAllPass& realization,
                                                     int n_sections, std::size_t length) {
  const int np = realization.order();
  std::vector<Eigen::MatrixXd> out(n_sections, Eigen::MatrixXd::Zero(np, static_cast<Eigen::Index>(length)));
  FilterBank bank(realization, n_sections);
  for (std::size_t t = 0; t < length; ++t) {
    const auto o = bank.outputs();
    for (int k = 0; k < n_sections; ++k) {
      for (int i = 0; i < np; ++i) out[k](i, static_cast<Eigen::Index>(t)) = o[k * np + i];
    }
    bank.push(t == 0 ? 1.0 : 0.0);
  }
  return out;
}

Polynomial characteristic_poly_ao(const BasisSpec& spec, int eta_a) {
  const int np = spec.eta_p();
  if (eta_a <= 0 || eta_a % np != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("eta_a = {} is not a positive multiple of eta_p = {}", eta_a, np));
  }
  std::vector<cdouble> acc{1.0};
  for (int rep = 0; rep < eta_a / np; ++rep) {
    for (const auto& p : spec.poles()) {
      std::vector<cdouble> next(acc.size() + 1, 0.0);
      for (std::size_t i = 0; i < acc.size(); ++i) {
        next[i] += acc[i];
        next[i + 1] -= p * acc[i];
      }
      acc = std::move(next);
    }
  }
  std::vector<double> coeffs(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) coeffs[i] = acc[i].real();
  return Polynomial(std::move(coeffs));
}

std::size_t truncation_length(const BasisSpec& spec, double tol, std::size_t cap) {
  const double r = spec.max_modulus();
  if (r == 0.0) return 1;
  const double t = std::ceil(std::log(tol) / std::log(r));
  return std::min<std::size_t>(cap, static_cast<std::size_t>(std::max(1.0, t)));
}

}  // namespace gobf
