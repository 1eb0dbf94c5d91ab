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

// Polynomial remainder codes with non-pairwise coprime moduli.
//
// A message a(x) with deg(a) < deg(M), M = lcm(m_1, ..., m_L), is sent as its
// residue vector (a mod m_1, ..., a mod m_L). Shared factors d_ij = gcd(m_i, m_j)
// make residues redundant: a_i = a_j mod d_ij for every codeword. The code
// distance follows from how many moduli carry each maximal prime-power factor
// of M; we count it on a coprime basis instead of an irreducible factorization
// (every irreducible inside a basis element b has its exponents proportional to
// b's, so "carries the full power" is decided per basis element).

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "polyrc/error.hpp"
#include "polyrc/field_poly.hpp"

namespace polyrc {

/// Validated user-facing moduli: L >= 2, each monic with degree >= 1, pairwise distinct.
class ModuliSet {
 public:
  ModuliSet(PrimeField field, std::vector<Polynomial> moduli) : field_(field), moduli_(std::move(moduli)) {
    if (moduli_.size() < 2) {
      throw Error(ErrorCode::kInvalidModuli, "need at least 2 moduli, got " + std::to_string(moduli_.size()));
    }
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      if (!(moduli_[i].field() == field_)) throw Error(ErrorCode::kFieldMismatch, "modulus " + std::to_string(i));
      if (moduli_[i].deg_or_minus_one() < 1) {
        throw Error(ErrorCode::kInvalidModuli, "modulus at index " + std::to_string(i) + " has degree < 1");
      }
      if (!moduli_[i].is_monic()) {
        throw Error(ErrorCode::kInvalidModuli, "modulus at index " + std::to_string(i) + " is not monic");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (moduli_[i] == moduli_[j]) {
          throw Error(ErrorCode::kInvalidModuli,
                      "moduli at indices " + std::to_string(j) + " and " + std::to_string(i) + " are identical");
        }
      }
    }
  }

  const PrimeField& field() const noexcept { return field_; }
  std::span<const Polynomial> moduli() const noexcept { return moduli_; }
  std::size_t size() const noexcept { return moduli_.size(); }
  const Polynomial& operator[](std::size_t i) const { return moduli_.at(i); }

 private:
  PrimeField field_;
  std::vector<Polynomial> moduli_;
};

/// Received or transmitted residues; std::nullopt marks an erasure.
struct ResidueVector {
  std::vector<std::optional<Polynomial>> residues;

  std::size_t size() const noexcept { return residues.size(); }
  bool is_erased(std::size_t i) const { return !residues.at(i).has_value(); }
  bool has_erasures() const {
    return std::any_of(residues.begin(), residues.end(), [](const auto& r) { return !r.has_value(); });
  }
  const Polynomial& at(std::size_t i) const {
    if (!residues.at(i)) throw Error(ErrorCode::kErasedOperand, "residue " + std::to_string(i) + " is erased");
    return *residues[i];
  }

  friend bool operator==(const ResidueVector&, const ResidueVector&) = default;
};

/// `r0;r1;...` with each residue in polynomial text format and `*` for an erasure.
inline std::string to_string(const ResidueVector& rv) {
  std::string out;
  for (std::size_t i = 0; i < rv.size(); ++i) {
    if (i) out += ';';
    out += rv.residues[i] ? to_string(*rv.residues[i]) : std::string("*");
  }
  return out;
}

inline ResidueVector parse_residue_vector(PrimeField field, std::string_view text) {
  ResidueVector rv;
  std::stringstream ss{std::string(text)};
  std::string token;
  while (std::getline(ss, token, ';')) {
    auto first = token.find_first_not_of(" \t");
    if (first != std::string::npos && token.substr(first, 1) == "*") {
      rv.residues.emplace_back(std::nullopt);
    } else {
      rv.residues.emplace_back(parse_polynomial(field, token));
    }
  }
  if (rv.residues.empty()) throw Error(ErrorCode::kParseError, "empty residue vector");
  return rv;
}

struct CrtWeight {
  Polynomial mu;       ///< pairwise-coprime part assigned to this modulus
  Polynomial cofactor; ///< M / mu
  Polynomial inverse;  ///< (M / mu)^-1 mod mu, or 0 when mu = 1
};

/// Moduli-level data shared by user codes and the derived codes used inside
/// algorithm_one. Unlike ModuliSet this admits duplicate moduli and L = 1.
struct RemainderCode {
  PrimeField field;
  std::vector<Polynomial> moduli;
  Polynomial lcm;
  std::vector<std::vector<Polynomial>> gcds;  ///< d_ij; diagonal holds m_i
  CoprimeBasis basis;
  std::vector<unsigned> max_exponents;  ///< exponent of each basis element in lcm
  int code_distance = 0;
  std::vector<CrtWeight> crt_weights;  ///< full-set weights, mu assigned to the lowest index
  /// Subset weights keyed by bitmask; populated for L <= kSubsetCacheLimit, empty entry when lcm(subset) != M.
  std::vector<std::optional<std::vector<CrtWeight>>> subset_weights;

  static constexpr std::size_t kSubsetCacheLimit = 8;

  std::size_t size() const noexcept { return moduli.size(); }
  int correctable() const noexcept { return (code_distance - 1) / 2; }
  Degree lcm_degree() const noexcept { return lcm.degree(); }
};

namespace detail {

inline std::uint64_t mask_of(std::span<const std::size_t> subset) {
  std::uint64_t m = 0;
  for (auto i : subset) m |= std::uint64_t{1} << i;
  return m;
}

/// CRT weights for a subset of moduli (indices ascending), or nullopt when lcm(subset) != M.
inline std::optional<std::vector<CrtWeight>> compute_weights(const RemainderCode& code,
                                                             std::span<const std::size_t> subset) {
  const auto& F = code.field;
  std::vector<Polynomial> mu(subset.size(), Polynomial::one(F));
  for (std::size_t k = 0; k < code.basis.elements.size(); ++k) {
    std::optional<std::size_t> owner;
    for (std::size_t s = 0; s < subset.size(); ++s) {
      if (code.basis.exponents[subset[s]][k] == code.max_exponents[k]) {
        owner = s;
        break;
      }
    }
    if (!owner) return std::nullopt;
    mu[*owner] *= pow(code.basis.elements[k], code.max_exponents[k]);
  }
  std::vector<CrtWeight> out;
  out.reserve(subset.size());
  for (auto& m : mu) {
    Polynomial cofactor = code.lcm / m;
    Polynomial inverse = m.deg_or_minus_one() >= 1 ? inv_mod(cofactor, m) : Polynomial(F);
    out.push_back({std::move(m), std::move(cofactor), std::move(inverse)});
  }
  return out;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace detail

/// Code distance on a coprime basis: the fewest moduli carrying a maximal power.
inline int basis_code_distance(const CoprimeBasis& basis, std::span<const unsigned> max_exponents) {
  int d = static_cast<int>(basis.exponents.size());
  for (std::size_t k = 0; k < basis.elements.size(); ++k) {
    int count = 0;
    for (const auto& row : basis.exponents) count += row[k] == max_exponents[k] ? 1 : 0;
    d = std::min(d, count);
  }
  return d;
}

inline RemainderCode make_remainder_code(PrimeField field, std::vector<Polynomial> moduli) {
  if (moduli.empty()) throw Error(ErrorCode::kEmptyInput, "remainder code needs at least one modulus");
  RemainderCode code{field, std::move(moduli), Polynomial(field), {}, {}, {}, 0, {}, {}};
  const std::size_t L = code.moduli.size();
  code.lcm = lcm_monic(code.moduli);
  code.gcds.assign(L, std::vector<Polynomial>(L, Polynomial(field)));
  for (std::size_t i = 0; i < L; ++i) {
    code.gcds[i][i] = code.moduli[i];
    for (std::size_t j = i + 1; j < L; ++j) {
      code.gcds[i][j] = gcd_monic(code.moduli[i], code.moduli[j]);
      code.gcds[j][i] = code.gcds[i][j];
    }
  }
  code.basis = coprime_refine(code.moduli);
  code.max_exponents.assign(code.basis.elements.size(), 0);
  for (const auto& row : code.basis.exponents) {
    for (std::size_t k = 0; k < row.size(); ++k) code.max_exponents[k] = std::max(code.max_exponents[k], row[k]);
  }
  code.code_distance = basis_code_distance(code.basis, code.max_exponents);

  const auto all = detail::all_indices(L);
  code.crt_weights = *detail::compute_weights(code, all);
  if (L <= RemainderCode::kSubsetCacheLimit) {
    code.subset_weights.resize(std::size_t{1} << L);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << L); ++mask) {
      std::vector<std::size_t> subset;
      for (std::size_t i = 0; i < L; ++i) {
        if (mask >> i & 1u) subset.push_back(i);
      }
      code.subset_weights[mask] = detail::compute_weights(code, subset);
    }
  }
  return code;
}

/// True iff r_i = r_j mod gcd(m_i, m_j).
inline bool residues_consistent(const RemainderCode& code, std::size_t i, std::size_t j, const Polynomial& ri,
                                const Polynomial& rj) {
  const auto& g = code.gcds[i][j];
  if (g.deg_or_minus_one() < 1) return true;
  return ((ri - rj) % g).is_zero();
}

/// CRT over a subset without consistency checking. Throws SubsetLcmTooSmall when lcm(subset) != M.
inline Polynomial crt_combine(const RemainderCode& code, std::span<const std::size_t> subset,
                              std::span<const Polynomial> residues) {
  std::optional<std::vector<CrtWeight>> computed;
  const std::vector<CrtWeight>* weights = nullptr;
  if (subset.size() == code.size()) {
    weights = &code.crt_weights;
  } else if (!code.subset_weights.empty()) {
    const auto& cached = code.subset_weights[detail::mask_of(subset)];
    if (cached) weights = &*cached;
  } else {
    computed = detail::compute_weights(code, subset);
    if (computed) weights = &*computed;
  }
  if (weights == nullptr) {
    throw Error(ErrorCode::kSubsetLcmTooSmall, "lcm of the selected moduli is a proper divisor of M");
  }
  Polynomial acc(code.field);
  for (std::size_t s = 0; s < subset.size(); ++s) {
    const auto& w = (*weights)[s];
    if (w.mu.deg_or_minus_one() < 1) continue;
    acc += ((residues[s] * w.inverse) % w.mu) * w.cofactor;
  }
  return acc;
}

/// Full analysis of a moduli set: pairwise tables, code distance, derived codes
/// and CRT weights. Immutable once built.
struct CodeProfile {
  ModuliSet moduli_set;
  RemainderCode code;
  std::vector<std::vector<int>> tau_matrix;  ///< deg d_ij; diagonal is -1
  std::vector<int> tau_per_index;            ///< tau_j = min_{i != j} tau_ij
  std::vector<std::vector<Polynomial>> gamma_matrix;  ///< Gamma_ij = m_i / d_ij; diagonal 1
  /// gamma_inverse[i][j] = Gamma_ij^-1 mod Gamma_ji, zero when deg(Gamma_ji) = 0.
  std::vector<std::vector<Polynomial>> gamma_inverse;

  /// Derived code at reference i: moduli Gamma_ji for j != i with deg >= 1.
  struct Derived {
    std::vector<std::size_t> indices;
    std::optional<RemainderCode> code;
  };
  std::vector<Derived> derived;
  std::vector<int> derived_distance;       ///< w^(i)
  std::vector<bool> degenerate_reference;  ///< fewer than 2 informative derived moduli

  std::size_t size() const noexcept { return moduli_set.size(); }
  const PrimeField& field() const noexcept { return moduli_set.field(); }
  const Polynomial& modulus(std::size_t i) const { return moduli_set[i]; }
  const Polynomial& lcm() const noexcept { return code.lcm; }
  int code_distance() const noexcept { return code.code_distance; }
  int correctable() const noexcept { return code.correctable(); }
  const Polynomial& d(std::size_t i, std::size_t j) const { return code.gcds.at(i).at(j); }
  const std::vector<CrtWeight>& crt_weights() const noexcept { return code.crt_weights; }
  std::vector<Polynomial> mu() const {
    std::vector<Polynomial> out;
    for (const auto& w : code.crt_weights) out.push_back(w.mu);
    return out;
  }
};

inline CodeProfile build_profile(const ModuliSet& ms) {
  const auto& F = ms.field();
  const std::size_t L = ms.size();
  CodeProfile profile{ms, make_remainder_code(F, {ms.moduli().begin(), ms.moduli().end()}), {}, {}, {}, {}, {}, {}, {}};

  profile.tau_matrix.assign(L, std::vector<int>(L, -1));
  profile.tau_per_index.assign(L, 0);
  profile.gamma_matrix.assign(L, std::vector<Polynomial>(L, Polynomial::one(F)));
  profile.gamma_inverse.assign(L, std::vector<Polynomial>(L, Polynomial(F)));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      if (i == j) continue;
      profile.tau_matrix[i][j] = profile.d(i, j).deg_or_minus_one();
      profile.gamma_matrix[i][j] = ms[i] / profile.d(i, j);
    }
  }
  for (std::size_t j = 0; j < L; ++j) {
    int t = profile.tau_matrix[j][j == 0 ? 1 : 0];
    for (std::size_t i = 0; i < L; ++i) {
      if (i != j) t = std::min(t, profile.tau_matrix[i][j]);
    }
    profile.tau_per_index[j] = t;
  }
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      if (i == j || profile.gamma_matrix[j][i].deg_or_minus_one() < 1) continue;
      profile.gamma_inverse[i][j] = inv_mod(profile.gamma_matrix[i][j], profile.gamma_matrix[j][i]);
    }
  }

  profile.derived.resize(L);
  profile.derived_distance.assign(L, 0);
  profile.degenerate_reference.assign(L, false);
  for (std::size_t i = 0; i < L; ++i) {
    auto& der = profile.derived[i];
    std::vector<Polynomial> moduli;
    for (std::size_t j = 0; j < L; ++j) {
      if (j == i || profile.gamma_matrix[j][i].deg_or_minus_one() < 1) continue;
      der.indices.push_back(j);
      moduli.push_back(profile.gamma_matrix[j][i]);
    }
    profile.degenerate_reference[i] = der.indices.size() < 2;
    if (moduli.empty()) {
      // m_i = M: the derived code is empty and the folding polynomial is always 0.
      profile.derived_distance[i] = static_cast<int>(L) - 1;
    } else {
      der.code = make_remainder_code(F, std::move(moduli));
      profile.derived_distance[i] = der.code->code_distance;
    }
  }
  return profile;
}

inline void validate_residues(const CodeProfile& profile, const ResidueVector& rv) {
  if (rv.size() != profile.size()) {
    throw Error(ErrorCode::kInvalidResidue, "expected " + std::to_string(profile.size()) + " residues, got " +
                                                std::to_string(rv.size()));
  }
  for (std::size_t i = 0; i < rv.size(); ++i) {
    if (rv.is_erased(i)) continue;
    const auto& r = *rv.residues[i];
    if (!(r.field() == profile.field())) throw Error(ErrorCode::kFieldMismatch, "residue " + std::to_string(i));
    if (r.degree() >= profile.modulus(i).degree()) {
      throw Error(ErrorCode::kInvalidResidue, "residue " + std::to_string(i) + " has degree >= deg(m_i)");
    }
  }
}

inline ResidueVector encode(const CodeProfile& profile, const Polynomial& a) {
  if (a.degree() >= profile.lcm().degree()) {
    throw Error(ErrorCode::kMessageTooLarge, "deg(a) must be below deg(M) = " +
                                                 std::to_string(profile.lcm().deg_or_minus_one()));
  }
  ResidueVector rv;
  rv.residues.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) rv.residues.emplace_back(a % profile.modulus(i));
  return rv;
}

inline bool consistency_check(const CodeProfile& profile, std::size_t i, std::size_t j, const ResidueVector& rv) {
  if (i == j || i >= profile.size() || j >= profile.size()) {
    throw Error(ErrorCode::kOutOfRange, "consistency check needs two distinct valid indices");
  }
  return residues_consistent(profile.code, i, j, rv.at(i), rv.at(j));
}

/// Unique a with deg(a) < deg(M) matching every residue in `subset`.
inline Polynomial crt_reconstruct(const CodeProfile& profile, const ResidueVector& rv,
                                  std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error(ErrorCode::kEmptyInput, "empty subset");
  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= profile.size()) {
    throw Error(ErrorCode::kOutOfRange, "subset indices must be distinct and < L");
  }
  std::vector<Polynomial> residues;
  for (auto i : sorted) residues.push_back(rv.at(i));
  for (std::size_t s = 0; s < sorted.size(); ++s) {
    for (std::size_t t = s + 1; t < sorted.size(); ++t) {
      if (!residues_consistent(profile.code, sorted[s], sorted[t], residues[s], residues[t])) {
        throw Error(ErrorCode::kInconsistentSubset, "residues " + std::to_string(sorted[s]) + " and " +
                                                        std::to_string(sorted[t]) + " fail the consistency check");
      }
    }
  }
  return crt_combine(profile.code, sorted, residues);
}

inline Polynomial crt_reconstruct(const CodeProfile& profile, const ResidueVector& rv) {
  const auto all = detail::all_indices(profile.size());
  return crt_reconstruct(profile, rv, all);
}

/// k_i in a = k_i * m_i + (a mod m_i).
inline Polynomial folding_polynomial(const CodeProfile& profile, const Polynomial& a, std::size_t i) {
  if (a.degree() >= profile.lcm().degree()) throw Error(ErrorCode::kMessageTooLarge, "deg(a) >= deg(M)");
  return a / profile.modulus(i);
}

}  // namespace polyrc
