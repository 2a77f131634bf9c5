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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gobf/bench.hpp"
#include "gobf/distortion.hpp"
#include "gobf/io.hpp"

namespace fs = std::filesystem;
using gobf::io::json;

namespace {

constexpr int kExitUnexpected = 1;

struct Common {
  std::optional<std::string> config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> poles;
  std::optional<int> order;
  std::optional<std::string> scheme;
};

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

json config_or_empty(const Common& c) {
  return c.config ? gobf::io::read_json(*c.config) : json::object();
}

json extrema_to_json(const gobf::ChiExtremaReport& r) {
  json j;
  j["omega_o"] = r.modal.omega_o;
  j["zeta"] = r.modal.zeta;
  j["classification"] = std::string(gobf::to_string(r.classification));
  j["omega_max"] = r.omega_max;
  j["omega_min"] = r.omega_min ? json(*r.omega_min) : json(nullptr);
  j["hypothesis_holds"] = r.hypothesis_holds;
  j["increasing_condition"] = r.increasing_condition;
  j["minimum_condition"] = r.minimum_condition;
  j["real_pole_condition"] = r.real_pole_condition ? json(*r.real_pole_condition) : json(nullptr);
  return j;
}

void run_basis(const Common& c, int points) {
  const json cfg = config_or_empty(c);
  std::vector<gobf::cdouble> poles;
  if (c.poles) {
    poles = gobf::io::parse_pole_list(*c.poles);
  } else if (cfg.contains("poles")) {
    poles = gobf::io::poles_from_json(cfg["poles"]);
  } else {
    throw gobf::Error(gobf::ErrorCode::kInvalidArgument, "basis needs --poles or a config with 'poles'");
  }
  const auto spec = gobf::validate_basis(poles);
  const auto dir = out_dir(c);
  gobf::write_chi_csv(dir / "chi.csv", spec, gobf::log_grid(1e-5, std::numbers::pi, points));

  json report;
  report["version"] = gobf::io::kFormatVersion;
  report["poles"] = gobf::io::poles_to_json(spec.poles());
  json extrema = json::array();
  for (const auto& p : spec.poles()) {
    if (p.imag() < 0.0 || std::abs(p) == 0.0) continue;
    extrema.push_back(extrema_to_json(gobf::chi_extrema(p)));
  }
  report["extrema"] = extrema;
  report["local_maxima"] = gobf::chi_local_maxima(spec);
  const auto cons = gobf::chi_conservation(spec);
  report["conservation"] = {{"raw", cons.raw}, {"normalized", cons.normalized},
                            {"error_estimate", cons.error_estimate}};
  gobf::io::write_json(dir / "basis_report.json", report);
  print_json(report);
}

void run_spr(const Common& c, const std::optional<std::string>& ao_text,
             const std::optional<std::string>& d_text, std::optional<double> lambda2,
             std::optional<int> grid) {
  const json cfg = config_or_empty(c);
  auto poly = [&](const std::optional<std::string>& text, const char* key) {
    if (text) {
      std::vector<double> v;
      for (const auto& p : gobf::io::parse_pole_list(*text)) v.push_back(p.real());
      return gobf::Polynomial(v);
    }
    if (cfg.contains(key)) return gobf::io::polynomial_from_json(cfg[key], key);
    throw gobf::Error(gobf::ErrorCode::kInvalidArgument, fmt::format("spr needs '{}'", key));
  };
  const auto ao = poly(ao_text, "a_o");
  const auto d = poly(d_text, "d");
  const double l2 = lambda2 ? *lambda2 : cfg.value("lambda2", 1.0);
  const int g = grid ? *grid : cfg.value("grid", gobf::kDefaultSprGrid);
  print_json(gobf::io::to_json(gobf::spr_check(ao, d, l2, g)));
}

void run_simulate(const Common& c, const std::optional<std::string>& model_path, std::size_t length,
                  int registers, std::optional<double> snr_db, std::optional<double> noise_std,
                  const std::string& mode) {
  gobf::Signal u = gobf::prbs(registers, length);
  gobf::Signal clean;
  std::optional<gobf::RationalModel> model;
  if (model_path) {
    model = gobf::io::model_from_json(gobf::io::read_json(*model_path));
    clean = gobf::simulate(*model, u).y;
  } else {
    clean = gobf::filter(gobf::stiff_benchmark().model, u);
  }
  double sigma = 0.0;
  if (snr_db) sigma = gobf::noise_std_for_snr(clean, *snr_db);
  if (noise_std) sigma = *noise_std;
  if (mode != "output" && mode != "equation") {
    throw gobf::Error(gobf::ErrorCode::kInvalidArgument, "--noise-mode is 'output' or 'equation'");
  }
  gobf::Signal y = clean;
  if (sigma > 0.0) {
    const gobf::NoiseSpec spec{sigma, c.seed.value_or(1)};
    if (model && mode == "equation") {
      y = gobf::simulate(*model, u, std::pair{spec, gobf::NoiseMode::kEquationError}).y;
    } else {
      const auto v = gobf::white_noise(spec, u.size());
      for (std::size_t t = 0; t < y.size(); ++t) y[t] += v[t];
    }
  }
  std::vector<double> t(u.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  const auto dir = out_dir(c);
  gobf::io::write_csv(dir / "data.csv", {"t", "u", "y"}, {t, u.samples, y.samples});
  print_json({{"version", gobf::io::kFormatVersion}, {"samples", u.size()}, {"noise_std", sigma},
              {"data", (dir / "data.csv").string()}});
}

void run_identify(const Common& c, const std::string& data) {
  json cfg = config_or_empty(c);
  cfg["data_path"] = data;
  if (c.poles) cfg["poles"] = gobf::io::poles_to_json(gobf::io::parse_pole_list(*c.poles));
  if (c.order) cfg["eta_a"] = *c.order;
  if (c.scheme) cfg["scheme"] = *c.scheme;
  if (c.seed) cfg["seed"] = *c.seed;
  if (!cfg.contains("name")) cfg["name"] = "identify";
  const auto config = gobf::experiment_config_from_json(cfg);
  const auto dir = out_dir(c);
  const auto outcome = gobf::run_experiment(config, dir);
  gobf::io::write_json(dir / "model.json", gobf::io::to_json(outcome.ident->model, config.poles));
  print_json(outcome.summary);
}

void run_experiment_cmd(const Common& c, const std::optional<std::string>& name) {
  json cfg = config_or_empty(c);
  if (name) cfg["preset"] = *name;
  if (!cfg.contains("preset") && !cfg.contains("name")) {
    throw gobf::Error(gobf::ErrorCode::kInvalidArgument,
                      "experiment needs a name (fig3, fig4, fig5) or --config");
  }
  if (c.poles) cfg["poles"] = gobf::io::poles_to_json(gobf::io::parse_pole_list(*c.poles));
  if (c.order) cfg["eta_a"] = *c.order;
  if (c.scheme) cfg["scheme"] = *c.scheme;
  if (c.seed) cfg["seed"] = *c.seed;
  const auto config = gobf::experiment_config_from_json(cfg);
  const auto outcome = gobf::run_experiment(config, out_dir(c));
  print_json(outcome.summary);
}

void run_bode(const Common& c, const std::string& model_path, int points, double omega_min) {
  const auto model = gobf::io::model_from_json(gobf::io::read_json(model_path));
  const auto dir = out_dir(c);
  const auto grid = gobf::log_grid(omega_min, std::numbers::pi, points);
  const auto resp = gobf::freq_response(model, grid);
  for (const auto& p : resp) {
    if (!p.ok) {
      throw gobf::Error(gobf::ErrorCode::kNumerical,
                        fmt::format("model has a pole on the unit circle near omega = {}", p.omega));
    }
  }
  gobf::write_bode_csv(dir / "bode.csv", [&](double w) { return model.response(w); }, grid);
  print_json({{"version", gobf::io::kFormatVersion}, {"points", grid.size()},
              {"bode", (dir / "bode.csv").string()}});
}

int report_error(int exit_code, const std::string& code, const std::string& message) {
  const json err = {{"version", gobf::io::kFormatVersion},
                    {"error", {{"code", code}, {"exit_code", exit_code}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-linear regression identification on generalized orthonormal bases"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--seed", common.seed, "noise seed");
    sub->add_option("--poles", common.poles, "basis poles, e.g. 0.6,0.9996 or 0.5+0.3i,0.5-0.3i");
    sub->add_option("--order", common.order, "predictor order eta_a");
    sub->add_option("--scheme", common.scheme, "hrls | herls | holoe")
        ->check(CLI::IsMember({"hrls", "herls", "holoe"}));
  };

  auto* basis = app.add_subcommand("basis", "distortion rate and extrema of a basis");
  int basis_points = 2000;
  basis->add_option("--points", basis_points, "chi grid size");
  add_common(basis);

  auto* spr = app.add_subcommand("spr", "SPR check of A_o/D - lambda2/2");
  std::optional<std::string> spr_ao, spr_d;
  std::optional<double> spr_l2;
  std::optional<int> spr_grid;
  spr->add_option("--ao", spr_ao, "A_o coefficients, ascending powers of q^-1");
  spr->add_option("--d", spr_d, "D coefficients (monic)");
  spr->add_option("--lambda2", spr_l2, "forgetting factor lambda2");
  spr->add_option("--grid", spr_grid, "frequency grid size");
  add_common(spr);

  auto* simulate = app.add_subcommand("simulate", "simulate a model or the stiff benchmark under PRBS");
  std::optional<std::string> sim_model;
  std::size_t sim_length = 2047;
  int sim_registers = 11;
  std::optional<double> sim_snr, sim_std;
  std::string sim_mode = "output";
  simulate->add_option("--model", sim_model, "model JSON (default: stiff benchmark)");
  simulate->add_option("--length", sim_length, "samples");
  simulate->add_option("--prbs-registers", sim_registers, "PRBS register count");
  simulate->add_option("--snr", sim_snr, "signal/noise ratio in dB");
  simulate->add_option("--noise-std", sim_std, "noise standard deviation");
  simulate->add_option("--noise-mode", sim_mode, "output | equation");
  add_common(simulate);

  auto* identify = app.add_subcommand("identify", "identify from a t,u,y CSV");
  std::string id_data;
  identify->add_option("--data", id_data, "t,u,y CSV")->required()->check(CLI::ExistingFile);
  add_common(identify);

  auto* experiment = app.add_subcommand("experiment", "run a bundled or configured experiment");
  std::optional<std::string> exp_name;
  experiment->add_option("name", exp_name, "fig3 | fig4 | fig5")
      ->check(CLI::IsMember(gobf::experiment_preset_names()));
  add_common(experiment);

  auto* bode = app.add_subcommand("bode", "frequency response of a model JSON");
  std::string bode_model;
  int bode_points = 1000;
  double bode_min = 1e-5;
  bode->add_option("--model", bode_model, "model JSON")->required()->check(CLI::ExistingFile);
  bode->add_option("--points", bode_points, "grid size");
  bode->add_option("--omega-min", bode_min, "lowest frequency, rad/sample");
  add_common(bode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(static_cast<int>(gobf::ErrorCode::kInvalidArgument), "invalid_argument",
                        e.what());
  }

  try {
    if (*basis) run_basis(common, basis_points);
    if (*spr) run_spr(common, spr_ao, spr_d, spr_l2, spr_grid);
    if (*simulate) run_simulate(common, sim_model, sim_length, sim_registers, sim_snr, sim_std, sim_mode);
    if (*identify) run_identify(common, id_data);
    if (*experiment) run_experiment_cmd(common, exp_name);
    if (*bode) run_bode(common, bode_model, bode_points, bode_min);
  } catch (const gobf::Error& e) {
    return report_error(static_cast<int>(e.code()), std::string(gobf::to_string(e.code())), e.what());
  } catch (const json::exception& e) {
    return report_error(static_cast<int>(gobf::ErrorCode::kSchema), "schema", e.what());
  } catch (const fs::filesystem_error& e) {
    return report_error(static_cast<int>(gobf::ErrorCode::kIo), "io", e.what());
  } catch (const std::exception& e) {
    return report_error(kExitUnexpected, "unexpected", e.what());
  }
  return 0;
}
