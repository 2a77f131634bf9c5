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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gobf/analysis.hpp"
#include "gobf/io.hpp"

namespace gobf {

/// Lightly damped mode: z-plane pair r e^{+-i theta}, r = exp(-zeta omega),
/// theta = omega sqrt(1 - zeta^2).
struct Mode {
  double omega = 0.0;
  double zeta = 0.0;
};

struct BenchmarkSystem {
  std::string id;
  std::string description;
  FactoredModel model;
  std::vector<Mode> resonances;
  std::vector<Mode> antiresonances;
  double real_pole = 0.0;
  int order = 0;
  double snr_db = 0.0;
  int prbs_registers = 0;
};

/// Order-9 stiff system: two clusters, each with two resonances and two
/// antiresonances, three decades apart; one real pole; one sample of delay;
/// unit DC gain. The numbers are constants of this library.
BenchmarkSystem stiff_benchmark();

/// Monic biquad 1 - 2 r cos(theta) q^-1 + r^2 q^-2 of a mode.
Polynomial mode_polynomial(const Mode& mode);

struct ExcitationSpec {
  int prbs_registers = 11;
  std::size_t length = 2047;
  double amplitude = 1.0;
};

struct ExperimentConfig {
  std::string name = "custom";
  std::string benchmark = "stiff9";
  std::optional<std::filesystem::path> data_path;  ///< t,u,y CSV instead of a benchmark
  Scheme scheme = Scheme::kHErls;
  std::vector<cdouble> poles{cdouble{0.6, 0.0}};
  int eta_a = 6;
  PaaOptions paa;
  double snr_db = 22.0;
  std::uint64_t seed = 1;
  ExcitationSpec excitation;
  std::vector<std::pair<double, double>> bands{{2e-4, 5e-3}, {0.2, 3.141592653589793}};
  std::size_t bode_points = 1000;
  double bode_omega_min = 1e-5;
  std::size_t chi_points = 2000;
  std::size_t trajectory_decimation = 1000;
};

ExperimentConfig experiment_preset(const std::string& name);
std::vector<std::string> experiment_preset_names();

/// Parses and validates a config object; absent keys take the defaults above.
ExperimentConfig experiment_config_from_json(const io::json& j);
io::json to_json(const ExperimentConfig& config);

struct ExperimentOutcome {
  ExperimentConfig config;
  std::optional<IdentResult> ident;
  BandFitReport band_fit;
  double noise_std = 0.0;
  double achieved_snr_db = 0.0;
  std::size_t samples = 0;
  io::json summary;
  std::vector<std::filesystem::path> artifacts;
};

/// Simulates (or loads) the data, identifies, analyses, and writes the
/// artifact set into `out_dir` when given. Files written by a failing run
/// are removed before the error propagates.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::optional<std::filesystem::path>& out_dir);

/// omega, mag_db, phase_deg on a log grid.
void write_bode_csv(const std::filesystem::path& path, const FrequencyFunction& h,
                    const std::vector<double>& omegas);

/// omega, log10_omega, chi, beta_prime.
void write_chi_csv(const std::filesystem::path& path, const BasisSpec& spec,
                   const std::vector<double>& omegas);

}  // namespace gobf
