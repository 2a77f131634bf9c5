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

#include "gobf/bench.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>

#include <fmt/format.h>

#include "gobf/distortion.hpp"

namespace gobf {

namespace {

constexpr double kRealPole = 0.3;

Biquad mode_ratio(const Mode& zero, const Mode& pole) {
  const Polynomial z = mode_polynomial(zero);
  const Polynomial p = mode_polynomial(pole);
  return {1.0, z[1], z[2], p[1], p[2]};
}

template <typename T>
T get_or(const io::json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!j[key].is_number_unsigned()) {
      throw Error(ErrorCode::kSchema, fmt::format("config key '{}' must be a non-negative integer", key));
    }
  }
  try {
    return j[key].get<T>();
  } catch (const io::json::exception& e) {
    throw Error(ErrorCode::kSchema, fmt::format("config key '{}': {}", key, e.what()));
  }
}

void check_keys(const io::json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorCode::kSchema, fmt::format("unknown key '{}' in {}", key, where));
  }
}

}  // namespace

Polynomial mode_polynomial(const Mode& mode) {
  const double r = std::exp(-mode.zeta * mode.omega);
  const double theta = mode.omega * std::sqrt(1.0 - mode.zeta * mode.zeta);
  return Polynomial{1.0, -2.0 * r * std::cos(theta), r * r};
}

BenchmarkSystem stiff_benchmark() {
  BenchmarkSystem b;
  b.id = "stiff9";
  b.description =
      "order 9: antiresonance/resonance pairs at (0.4, 0.5) and (0.8, 1.0) rad/sample, the same "
      "pattern scaled by 1e-3, damping 0.05, real pole 0.3, one sample delay, unit DC gain";
  b.antiresonances = {{0.4, 0.05}, {0.8, 0.05}, {4e-4, 0.05}, {8e-4, 0.05}};
  b.resonances = {{0.5, 0.05}, {1.0, 0.05}, {5e-4, 0.05}, {1e-3, 0.05}};
  b.real_pole = kRealPole;
  b.order = 9;
  b.snr_db = 22.0;
  b.prbs_registers = 20;
  for (std::size_t i = 0; i < b.resonances.size(); ++i) {
    b.model.sections.push_back(mode_ratio(b.antiresonances[i], b.resonances[i]));
  }
  b.model.sections.push_back({0.0, 1.0, 0.0, -kRealPole, 0.0});
  b.model.gain = 1.0;
  b.model.gain = 1.0 / b.model.response(0.0).real();
  return b;
}

std::vector<std::string> experiment_preset_names() { return {"fig3", "fig4", "fig5"}; }

ExperimentConfig experiment_preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.scheme = Scheme::kHErls;
  if (name == "fig3") {
    c.poles = {cdouble{0.6, 0.0}};
    c.eta_a = 6;
    c.excitation = {11, 2047, 1.0};
    c.trajectory_decimation = 10;
  } else if (name == "fig4") {
    c.poles = {cdouble{0.9996, 0.0}};
    c.eta_a = 6;
    c.excitation = {20, (std::size_t{1} << 20) - 1, 1.0};
  } else if (name == "fig5") {
    c.poles = {cdouble{0.6, 0.0}, cdouble{0.9996, 0.0}};
    c.eta_a = 10;
    c.excitation = {20, (std::size_t{1} << 20) - 1, 1.0};
  } else {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown experiment '{}'", name));
  }
  return c;
}

ExperimentConfig experiment_config_from_json(const io::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "experiment config must be a JSON object");
  check_keys(j,
             {"version", "name", "preset", "benchmark", "data_path", "scheme", "poles", "eta_a",
              "paa", "snr_db", "seed", "excitation", "bands", "bode_points", "bode_omega_min",
              "chi_points", "trajectory_decimation"},
             "experiment config");
  ExperimentConfig c;
  if (j.contains("preset")) c = experiment_preset(j["preset"].get<std::string>());
  c.name = get_or<std::string>(j, "name", c.name);
  c.benchmark = get_or<std::string>(j, "benchmark", c.benchmark);
  if (c.benchmark != "stiff9") {
    throw Error(ErrorCode::kSchema, fmt::format("unknown benchmark '{}'", c.benchmark));
  }
  if (j.contains("data_path") && !j["data_path"].is_null()) {
    c.data_path = get_or<std::string>(j, "data_path", "");
  }
  if (j.contains("scheme")) c.scheme = scheme_from_string(get_or<std::string>(j, "scheme", ""));
  if (j.contains("poles")) c.poles = io::poles_from_json(j["poles"]);
  c.eta_a = get_or<int>(j, "eta_a", c.eta_a);
  if (j.contains("paa")) {
    const auto& p = j["paa"];
    if (!p.is_object()) throw Error(ErrorCode::kSchema, "'paa' must be an object");
    check_keys(p,
               {"f0_scale", "lambda1", "lambda2", "a_posteriori_feedback", "divergence_threshold",
                "pd_check_interval", "spr_grid"},
               "paa");
    c.paa.f0_scale = get_or<double>(p, "f0_scale", c.paa.f0_scale);
    c.paa.lambda1 = get_or<double>(p, "lambda1", c.paa.lambda1);
    c.paa.lambda2 = get_or<double>(p, "lambda2", c.paa.lambda2);
    c.paa.a_posteriori_feedback = get_or<bool>(p, "a_posteriori_feedback", c.paa.a_posteriori_feedback);
    c.paa.divergence_threshold = get_or<double>(p, "divergence_threshold", c.paa.divergence_threshold);
    c.paa.pd_check_interval = get_or<std::size_t>(p, "pd_check_interval", c.paa.pd_check_interval);
    c.paa.spr_grid = get_or<int>(p, "spr_grid", c.paa.spr_grid);
  }
  c.snr_db = get_or<double>(j, "snr_db", c.snr_db);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("excitation")) {
    const auto& e = j["excitation"];
    if (!e.is_object()) throw Error(ErrorCode::kSchema, "'excitation' must be an object");
    check_keys(e, {"prbs_registers", "length", "amplitude"}, "excitation");
    c.excitation.prbs_registers = get_or<int>(e, "prbs_registers", c.excitation.prbs_registers);
    c.excitation.length = get_or<std::size_t>(e, "length", c.excitation.length);
    c.excitation.amplitude = get_or<double>(e, "amplitude", c.excitation.amplitude);
  }
  if (j.contains("bands")) {
    c.bands.clear();
    for (const auto& b : j["bands"]) {
      if (!b.is_array() || b.size() != 2) throw Error(ErrorCode::kSchema, "a band is [lo, hi]");
      c.bands.emplace_back(b[0].get<double>(), b[1].get<double>());
    }
  }
  c.bode_points = get_or<std::size_t>(j, "bode_points", c.bode_points);
  c.bode_omega_min = get_or<double>(j, "bode_omega_min", c.bode_omega_min);
  c.chi_points = get_or<std::size_t>(j, "chi_points", c.chi_points);
  c.trajectory_decimation = get_or<std::size_t>(j, "trajectory_decimation", c.trajectory_decimation);

  if (c.eta_a < 1) throw Error(ErrorCode::kSchema, "eta_a must be positive");
  if (c.poles.empty() || c.eta_a % static_cast<int>(c.poles.size()) != 0) {
    throw Error(ErrorCode::kSchema, "eta_a must be a multiple of the number of basis poles");
  }
  if (!(c.snr_db > -100.0 && c.snr_db < 400.0) && !std::isinf(c.snr_db)) {
    throw Error(ErrorCode::kSchema, "snr_db out of range");
  }
  if (c.excitation.length < 1 || !(c.excitation.amplitude > 0.0)) {
    throw Error(ErrorCode::kSchema, "excitation needs a positive length and amplitude");
  }
  if (c.excitation.prbs_registers < 2 || c.excitation.prbs_registers > 32) {
    throw Error(ErrorCode::kSchema, "prbs_registers must be in [2, 32]");
  }
  if (c.bode_points < 2 || c.chi_points < 2) throw Error(ErrorCode::kSchema, "grids need >= 2 points");
  if (!(c.bode_omega_min > 0.0 && c.bode_omega_min < std::numbers::pi)) {
    throw Error(ErrorCode::kSchema, "bode_omega_min must be in (0, pi)");
  }
  try {
    c.paa.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchema, e.what());
  }
  return c;
}

io::json to_json(const ExperimentConfig& c) {
  io::json j;
  j["version"] = io::kFormatVersion;
  j["name"] = c.name;
  j["benchmark"] = c.benchmark;
  j["data_path"] = c.data_path ? io::json(c.data_path->string()) : io::json(nullptr);
  j["scheme"] = std::string(to_string(c.scheme));
  j["poles"] = io::poles_to_json(c.poles);
  j["eta_a"] = c.eta_a;
  j["paa"] = {{"f0_scale", c.paa.f0_scale},
              {"lambda1", c.paa.lambda1},
              {"lambda2", c.paa.lambda2},
              {"a_posteriori_feedback", c.paa.a_posteriori_feedback},
              {"divergence_threshold", c.paa.divergence_threshold},
              {"pd_check_interval", c.paa.pd_check_interval},
              {"spr_grid", c.paa.spr_grid}};
  j["snr_db"] = c.snr_db;
  j["seed"] = c.seed;
  j["excitation"] = {{"prbs_registers", c.excitation.prbs_registers},
                     {"length", c.excitation.length},
                     {"amplitude", c.excitation.amplitude}};
  io::json bands = io::json::array();
  for (const auto& [lo, hi] : c.bands) bands.push_back({lo, hi});
  j["bands"] = bands;
  j["bode_points"] = c.bode_points;
  j["bode_omega_min"] = c.bode_omega_min;
  j["chi_points"] = c.chi_points;
  j["trajectory_decimation"] = c.trajectory_decimation;
  return j;
}

void write_bode_csv(const std::filesystem::path& path, const FrequencyFunction& h,
                    const std::vector<double>& omegas) {
  std::vector<double> mag(omegas.size()), phase(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const cdouble v = h(omegas[i]);
    mag[i] = 20.0 * std::log10(std::abs(v));
    phase[i] = std::arg(v) * 180.0 / std::numbers::pi;
  }
  io::write_csv(path, {"omega", "mag_db", "phase_deg"}, {omegas, mag, phase});
}

void write_chi_csv(const std::filesystem::path& path, const BasisSpec& spec,
                   const std::vector<double>& omegas) {
  std::vector<double> lw(omegas.size()), c(omegas.size()), bp(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    lw[i] = std::log10(omegas[i]);
    c[i] = chi(spec, omegas[i]);
    bp[i] = beta_prime(spec, omegas[i]);
  }
  io::write_csv(path, {"omega", "log10_omega", "chi", "beta_prime"}, {omegas, lw, c, bp});
}

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::optional<std::filesystem::path>& out_dir) {
  ExperimentOutcome outcome;
  outcome.config = config;
  auto emit = [&](const char* name, const auto& writer) {
    if (!out_dir) return;
    const auto path = *out_dir / name;
    outcome.artifacts.push_back(path);
    writer(path);
  };
  try {
    if (out_dir) std::filesystem::create_directories(*out_dir);
    const PredictorConfig pconfig(structure_for(config.scheme), validate_basis(config.poles),
                                  config.eta_a);
    Signal u, y;
    std::optional<BenchmarkSystem> bench;
    if (config.data_path) {
      const auto table = io::read_csv(*config.data_path);
      u = Signal(table.column("u"));
      y = Signal(table.column("y"));
    } else {
      bench = stiff_benchmark();
      u = prbs(config.excitation.prbs_registers, config.excitation.length, config.excitation.amplitude);
      const Signal clean = filter(bench->model, u);
      y = clean;
      if (std::isfinite(config.snr_db)) {
        outcome.noise_std = noise_std_for_snr(clean, config.snr_db);
        const Signal v = white_noise({outcome.noise_std, config.seed}, u.size());
        for (std::size_t t = 0; t < y.size(); ++t) y[t] += v[t];
        outcome.achieved_snr_db =
            20.0 * std::log10(standard_deviation(clean.samples) / standard_deviation(v.samples));
      } else {
        outcome.achieved_snr_db = config.snr_db;
      }
    }
    outcome.samples = u.size();

    PaaOptions options = config.paa;
    options.trajectory_decimation = config.trajectory_decimation;
    outcome.ident = run_identification(pconfig, u, y, options);
    const IdentResult& ident = *outcome.ident;
    const GobfModel model(pconfig, ident.theta);
    const auto g_hat = [&](double w) { return model.response(w); };

    io::json summary;
    summary["version"] = io::kFormatVersion;
    summary["name"] = config.name;
    summary["config"] = to_json(config);
    summary["samples"] = outcome.samples;
    summary["noise_std"] = outcome.noise_std;
    summary["achieved_snr_db"] = outcome.achieved_snr_db;
    summary["theta"] = std::vector<double>(ident.theta.values().data(),
                                           ident.theta.values().data() + ident.theta.size());
    summary["model"] = io::to_json(ident.model, config.poles);
    summary["f_condition"] = ident.f_condition;
    summary["stationarity_inf_norm"] = ident.stationarity.lpNorm<Eigen::Infinity>();
    const auto& eps = ident.apriori_errors.samples;
    summary["prediction_error_std"] = standard_deviation(
        std::span<const double>(eps).subspan(eps.size() / 2));

    const auto bode_grid = log_grid(config.bode_omega_min, std::numbers::pi,
                                    static_cast<int>(config.bode_points));
    if (bench) {
      const auto g = [&](double w) { return bench->model.response(w); };
      outcome.band_fit = band_fit(g, g_hat, config.bands);
      io::json bands = io::json::array();
      for (const auto& b : outcome.band_fit.bands) {
        bands.push_back({{"omega_lo", b.omega_lo}, {"omega_hi", b.omega_hi}, {"error", b.error}});
      }
      const io::json bandfit = {{"version", io::kFormatVersion},
                                {"units", "mean |log10|G| - log10|G_hat||"},
                                {"bands", bands}};
      summary["band_fit"] = bands;
      emit("bode_truth.csv", [&](const auto& p) { write_bode_csv(p, g, bode_grid); });
      emit("bandfit.json", [&](const auto& p) { io::write_json(p, bandfit); });
    }
    emit("bode_model.csv", [&](const auto& p) { write_bode_csv(p, g_hat, bode_grid); });
    emit("chi.csv", [&](const auto& p) {
      write_chi_csv(p, pconfig.spec(),
                    log_grid(1e-5, std::numbers::pi, static_cast<int>(config.chi_points)));
    });
    emit("theta_trajectory.csv", [&](const auto& p) {
      std::vector<std::string> header{"t", "epsilon"};
      std::vector<std::vector<double>> cols(2 + static_cast<std::size_t>(pconfig.dimension()));
      for (Eigen::Index i = 0; i < pconfig.dimension(); ++i) header.push_back(fmt::format("theta_{}", i));
      for (const auto& pt : ident.trajectory) {
        cols[0].push_back(static_cast<double>(pt.t));
        cols[1].push_back(pt.epsilon);
        for (Eigen::Index i = 0; i < pt.theta.size(); ++i) cols[2 + i].push_back(pt.theta(i));
      }
      io::write_csv(p, header, cols);
    });
    io::json spr = ident.spr ? io::to_json(*ident.spr)
                             : io::json{{"version", io::kFormatVersion},
                                        {"transfer", "none"},
                                        {"reason", "H-RLS has no convergence condition"}};
    summary["spr"] = spr;
    emit("spr.json", [&](const auto& p) { io::write_json(p, spr); });
    outcome.summary = summary;
    emit("summary.json", [&](const auto& p) { io::write_json(p, summary); });
  } catch (...) {
    for (const auto& p : outcome.artifacts) {
      std::error_code ec;
      if (std::filesystem::is_regular_file(p, ec)) std::filesystem::remove(p, ec);
    }
    throw;
  }
  return outcome;
}

}  // namespace gobf
