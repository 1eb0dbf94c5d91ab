/*
 * Copyright 2026 The polyrc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Code spec files: { "p": 5, "moduli": [[c0, c1, ...], ...], "generator": [...], "theta": 1 }
// Coefficients are low-order first and may be negative (reduced mod p).

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyrc/error.hpp"
#include "polyrc/field_poly.hpp"
#include "polyrc/remainder_code.hpp"

namespace polyrc {

struct CodeSpecFile {
  std::uint32_t p = 0;
  std::vector<std::vector<long long>> moduli;
  std::optional<std::vector<long long>> generator;
  std::optional<int> theta;
};

inline CodeSpecFile parse_code_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  CodeSpecFile spec;
  try {
    if (!doc.is_object()) throw Error(ErrorCode::kParseError, "top level must be an object");
    if (!doc.contains("p") || !doc.contains("moduli")) throw Error(ErrorCode::kParseError, "missing \"p\" or \"moduli\"");
    spec.p = doc.at("p").get<std::uint32_t>();
    spec.moduli = doc.at("moduli").get<std::vector<std::vector<long long>>>();
    if (doc.contains("generator")) spec.generator = doc.at("generator").get<std::vector<long long>>();
    if (doc.contains("theta")) spec.theta = doc.at("theta").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return spec;
}

inline CodeSpecFile load_code_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_code_spec(buf.str());
}

inline Polynomial polynomial_from(const PrimeField& field, const std::vector<long long>& coeffs) {
  std::vector<PrimeField::Element> reduced;
  reduced.reserve(coeffs.size());
  for (auto c : coeffs) reduced.push_back(field.reduce(c));
  return Polynomial(field, std::move(reduced));
}

/// Throws InvalidField / InvalidModuli when the contents do not form a valid code.
inline ModuliSet to_moduli_set(const CodeSpecFile& spec) {
  PrimeField field(spec.p);
  std::vector<Polynomial> moduli;
  for (const auto& m : spec.moduli) moduli.push_back(polynomial_from(field, m));
  return ModuliSet(field, std::move(moduli));
}

inline std::optional<Polynomial> generator_of(const CodeSpecFile& spec) {
  if (!spec.generator) return std::nullopt;
  auto g = polynomial_from(PrimeField(spec.p), *spec.generator);
  if (g.deg_or_minus_one() < 1) throw Error(ErrorCode::kInvalidModuli, "generator must have degree >= 1");
  return g;
}

}  // namespace polyrc
