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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gobf/convergence.hpp"
#include "gobf/lti.hpp"

namespace gobf::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Shortest round-trip text for a double.
std::string format_double(double v);

/// Columns of equal length written as one CSV with a header row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const;
};

/// Numeric CSV with a header row; every row must have the header's width.
CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const json& value);
json read_json(const std::filesystem::path& path);

json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j, const char* what);
json to_json(const RationalModel& model, const std::vector<cdouble>& basis_poles);
RationalModel model_from_json(const json& j);
json to_json(const SprReport& report);
json poles_to_json(const std::vector<cdouble>& poles);
std::vector<cdouble> poles_from_json(const json& j);

/// Parses "0.6,0.9996" or "0.5+0.3i,0.5-0.3i".
std::vector<cdouble> parse_pole_list(const std::string& text);

}  // namespace gobf::io
