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

#include "gobf/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace gobf::io {

namespace {

double parse_double(std::string_view text, const std::string& where) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kSchema, fmt::format("{}: '{}' is not a number", where, text));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) {
    throw Error(ErrorCode::kInvalidArgument, "write_csv: header and column counts differ");
  }
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw Error(ErrorCode::kInvalidArgument, "write_csv: ragged columns");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  fmt::memory_buffer buf;
  for (std::size_t i = 0; i < header.size(); ++i) {
    fmt::format_to(std::back_inserter(buf), "{}{}", i ? "," : "", header[i]);
  }
  buf.push_back('\n');
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      fmt::format_to(std::back_inserter(buf), "{}{:.17g}", i ? "," : "", columns[i][r]);
    }
    buf.push_back('\n');
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw Error(ErrorCode::kSchema, fmt::format("CSV has no column '{}'", name));
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot read {}", path.string()));
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kSchema, fmt::format("{} is empty", path.string()));
  for (auto field : split(line, ',')) table.header.push_back(trim(field));
  table.columns.resize(table.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::kSchema, fmt::format("{}:{}: expected {} fields, found {}",
                                                  path.string(), row, table.header.size(),
                                                  fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      table.columns[i].push_back(parse_double(fields[i], fmt::format("{}:{}", path.string(), row)));
    }
  }
  return table;
}

void write_json(const std::filesystem::path& path, const json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  out << value.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot read {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, fmt::format("{}: {}", path.string(), e.what()));
  }
}

json to_json(const Polynomial& p) { return p.coefficients(); }

Polynomial polynomial_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::kSchema, fmt::format("'{}' must be a nonempty array of numbers", what));
  }
  std::vector<double> c;
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::kSchema, fmt::format("'{}' holds a non-number", what));
    c.push_back(v.get<double>());
  }
  return Polynomial(std::move(c));
}

json poles_to_json(const std::vector<cdouble>& poles) {
  json out = json::array();
  for (const auto& p : poles) out.push_back({p.real(), p.imag()});
  return out;
}

std::vector<cdouble> poles_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kSchema, "'poles' must be an array");
  std::vector<cdouble> out;
  for (const auto& p : j) {
    if (p.is_number()) {
      out.emplace_back(p.get<double>(), 0.0);
    } else if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number()) {
      out.emplace_back(p[0].get<double>(), p[1].get<double>());
    } else {
      throw Error(ErrorCode::kSchema, "a pole is a number or a [re, im] pair");
    }
  }
  return out;
}

json to_json(const RationalModel& model, const std::vector<cdouble>& basis_poles) {
  json j;
  j["version"] = kFormatVersion;
  j["numerator"] = to_json(model.numerator);
  j["denominator"] = to_json(model.denominator);
  j["noise_numerator"] = model.noise_numerator ? to_json(*model.noise_numerator) : json(nullptr);
  j["basis_poles"] = poles_to_json(basis_poles);
  return j;
}

RationalModel model_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "model JSON must be an object");
  if (!j.contains("numerator") || !j.contains("denominator")) {
    throw Error(ErrorCode::kSchema, "model JSON needs 'numerator' and 'denominator'");
  }
  std::optional<Polynomial> noise;
  if (j.contains("noise_numerator") && !j["noise_numerator"].is_null()) {
    noise = polynomial_from_json(j["noise_numerator"], "noise_numerator");
  }
  try {
    return RationalModel(polynomial_from_json(j["numerator"], "numerator"),
                         polynomial_from_json(j["denominator"], "denominator"), noise);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchema, e.what());
  }
}

json to_json(const SprReport& r) {
  json j;
  j["version"] = kFormatVersion;
  j["transfer"] = r.transfer;
  j["min_real_part"] = r.min_real_part;
  j["argmin_omega"] = r.argmin_omega;
  j["denominator_stable"] = r.denominator_stable;
  j["denominator_radius"] = r.denominator_radius;
  j["is_spr"] = r.is_spr;
  j["grid_size"] = r.grid_size;
  j["reason"] = r.reason;
  return j;
}

std::vector<cdouble> parse_pole_list(const std::string& text) {
  std::vector<cdouble> out;
  for (auto field : split(text, ',')) {
    std::string f = trim(field);
    if (f.empty()) throw Error(ErrorCode::kInvalidArgument, "empty entry in pole list");
    if (f.back() != 'i' && f.back() != 'j') {
      out.emplace_back(parse_double(f, "pole list"), 0.0);
      continue;
    }
    f.pop_back();
    // Split at the sign that starts the imaginary part (not an exponent sign).
    std::size_t cut = std::string::npos;
    for (std::size_t i = f.size(); i-- > 1;) {
      if ((f[i] == '+' || f[i] == '-') && f[i - 1] != 'e' && f[i - 1] != 'E') {
        cut = i;
        break;
      }
    }
    if (cut == std::string::npos) {
      const std::string im = (f.empty() || f == "+") ? "1" : (f == "-" ? "-1" : f);
      out.emplace_back(0.0, parse_double(im, "pole list"));
    } else {
      std::string im = f.substr(cut);
      if (im == "+" || im == "-") im += "1";
      out.emplace_back(parse_double(f.substr(0, cut), "pole list"), parse_double(im, "pole list"));
    }
  }
  return out;
}

}  // namespace gobf::io
