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

// Reconstruction procedures for polynomial remainder codes:
//
//  - classic_decode: consistency-check voting, exact for <= floor((d-1)/2) errors.
//  - algorithm_one: recover one folding polynomial k_ref from residue differences
//    and return k_ref * m_ref + r_ref (robust to low-degree residue errors).
//  - robust_decode: algorithm_one at the reference with the largest robustness bound.
//  - mixed_decode: algorithm_one over 2A+1 references, then a clique of mutually
//    close reconstructions (A unrestricted errors + any number of bounded ones).
//  - combined_decode: algorithm_one over L-theta+1 references, then an exact
//    majority (A unrestricted + B(theta) bounded errors corrected exactly).
//
// All bounds are exclusive limits: an error-degree budget must be strictly below.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "polyrc/error.hpp"
#include "polyrc/field_poly.hpp"
#include "polyrc/remainder_code.hpp"

namespace polyrc {

enum class DecodeStatus { kExact, kRobust, kFailed };

enum class FailureReason {
  kNoSurvivors,
  kInconsistentSurvivors,
  kSurvivorRangeTooSmall,
  kNoMajority,
  kNoCluster,
};

constexpr std::string_view to_string(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::kExact: return "Exact";
    case DecodeStatus::kRobust: return "Robust";
    case DecodeStatus::kFailed: return "Failed";
  }
  return "?";
}

constexpr std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::kNoSurvivors: return "NoSurvivors";
    case FailureReason::kInconsistentSurvivors: return "InconsistentSurvivors";
    case FailureReason::kSurvivorRangeTooSmall: return "SurvivorRangeTooSmall";
    case FailureReason::kNoMajority: return "NoMajority";
    case FailureReason::kNoCluster: return "NoCluster";
  }
  return "?";
}

struct DecodeOutcome {
  DecodeStatus status = DecodeStatus::kFailed;
  std::optional<Polynomial> reconstruction;
  std::optional<std::size_t> reference_index;
  std::optional<FailureReason> failure_reason;
  /// Failed consistency checks per received residue; -1 for an erasure.
  std::vector<int> failed_checks;

  bool ok() const noexcept { return status != DecodeStatus::kFailed; }

  static DecodeOutcome failure(FailureReason reason) {
    DecodeOutcome out;
    out.failure_reason = reason;
    return out;
  }
  static DecodeOutcome success(DecodeStatus status, Polynomial value, std::optional<std::size_t> ref = std::nullopt) {
    DecodeOutcome out;
    out.status = status;
    out.reconstruction = std::move(value);
    out.reference_index = ref;
    return out;
  }
};

struct Capacity {
  int theta;
  int unrestricted;  ///< A = floor((d-1)/2)
  int bounded;       ///< B(theta) = floor((L-theta)/2) - A
};

/// Exclusive degree limits for the robust decoders.
struct BoundReport {
  std::vector<int> tau_per_reference;  ///< tau_{i(floor((w_i-1)/2)+1)}
  int tau_bound = 0;                   ///< max over references
  std::size_t best_reference = 0;      ///< lowest index attaining tau_bound
  int lambda_bound = 0;                ///< tau_(L - 2A)
  std::vector<int> eta_bound_by_theta;  ///< entry theta-1 holds tau_(theta), 1 <= theta <= L-2A
  std::vector<Capacity> capacities;

  int max_theta() const noexcept { return static_cast<int>(eta_bound_by_theta.size()); }
  int eta_bound(int theta) const {
    if (theta < 1 || theta > max_theta()) {
      throw Error(ErrorCode::kContractViolation, "theta must lie in [1, " + std::to_string(max_theta()) + "]");
    }
    return eta_bound_by_theta[static_cast<std::size_t>(theta - 1)];
  }
};

inline BoundReport compute_bounds(const CodeProfile& profile) {
  const std::size_t L = profile.size();
  const int A = profile.correctable();
  BoundReport report;
  report.tau_per_reference.resize(L);
  for (std::size_t i = 0; i < L; ++i) {
    std::vector<int> row;
    for (std::size_t k = 0; k < L; ++k) {
      if (k != i) row.push_back(profile.tau_matrix[i][k]);
    }
    std::sort(row.begin(), row.end());
    auto j = static_cast<std::size_t>((profile.derived_distance[i] - 1) / 2);
    report.tau_per_reference[i] = row[std::min(j, row.size() - 1)];
  }
  auto best = std::max_element(report.tau_per_reference.begin(), report.tau_per_reference.end());
  report.tau_bound = *best;
  report.best_reference = static_cast<std::size_t>(best - report.tau_per_reference.begin());

  std::vector<int> taus = profile.tau_per_index;
  std::sort(taus.begin(), taus.end());
  const int max_theta = static_cast<int>(L) - 2 * A;
  report.lambda_bound = taus[static_cast<std::size_t>(max_theta - 1)];
  for (int theta = 1; theta <= max_theta; ++theta) {
    report.eta_bound_by_theta.push_back(taus[static_cast<std::size_t>(theta - 1)]);
    report.capacities.push_back({theta, A, (static_cast<int>(L) - theta) / 2 - A});
  }
  return report;
}

/// Indices sorted by tau_j descending, ties by ascending index.
inline std::vector<std::size_t> reference_order(const CodeProfile& profile) {
  auto order = detail::all_indices(profile.size());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profile.tau_per_index[a] > profile.tau_per_index[b];
  });
  return order;
}

namespace detail {

inline std::vector<int> failed_check_counts(const RemainderCode& code, std::span<const Polynomial> residues) {
  std::vector<int> counts(residues.size(), 0);
  for (std::size_t i = 0; i < residues.size(); ++i) {
    for (std::size_t j = i + 1; j < residues.size(); ++j) {
      if (!residues_consistent(code, i, j, residues[i], residues[j])) {
        ++counts[i];
        ++counts[j];
      }
    }
  }
  return counts;
}

/// Consistency-check decoding of a fully received vector.
inline DecodeOutcome classic_decode_code(const RemainderCode& code, std::span<const Polynomial> residues) {
  auto counts = failed_check_counts(code, residues);
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    if (counts[i] <= code.correctable()) survivors.push_back(i);
  }
  DecodeOutcome out;
  if (survivors.empty()) {
    out = DecodeOutcome::failure(FailureReason::kNoSurvivors);
  } else {
    bool consistent = true;
    for (std::size_t s = 0; s < survivors.size() && consistent; ++s) {
      for (std::size_t t = s + 1; t < survivors.size(); ++t) {
        if (!residues_consistent(code, survivors[s], survivors[t], residues[survivors[s]], residues[survivors[t]])) {
          consistent = false;
          break;
        }
      }
    }
    if (!consistent) {
      out = DecodeOutcome::failure(FailureReason::kInconsistentSurvivors);
    } else {
      std::vector<Polynomial> picked;
      for (auto i : survivors) picked.push_back(residues[i]);
      try {
        out = DecodeOutcome::success(DecodeStatus::kExact, crt_combine(code, survivors, picked));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSubsetLcmTooSmall) throw;
        out = DecodeOutcome::failure(FailureReason::kSurvivorRangeTooSmall);
      }
    }
  }
  out.failed_checks = std::move(counts);
  return out;
}

inline std::vector<Polynomial> received(const ResidueVector& rv) {
  std::vector<Polynomial> out;
  out.reserve(rv.size());
  for (std::size_t i = 0; i < rv.size(); ++i) out.push_back(rv.at(i));
  return out;
}

/// Surviving moduli after erasures, with the profile rebuilt over them.
struct Survivors {
  CodeProfile profile;
  ResidueVector rv;
  std::vector<std::size_t> original;
};

inline std::optional<Survivors> drop_erasures(const CodeProfile& profile, const ResidueVector& rv) {
  std::vector<Polynomial> moduli;
  std::vector<std::size_t> original;
  ResidueVector kept;
  for (std::size_t i = 0; i < rv.size(); ++i) {
    if (rv.is_erased(i)) continue;
    moduli.push_back(profile.modulus(i));
    original.push_back(i);
    kept.residues.push_back(rv.residues[i]);
  }
  if (moduli.size() < 2) return std::nullopt;
  return Survivors{build_profile(ModuliSet(profile.field(), std::move(moduli))), std::move(kept), std::move(original)};
}

/// Runs `decode` on the erasure-free view and maps indices back to the caller's numbering.
template <class Decode>
DecodeOutcome with_erasures(const CodeProfile& profile, const ResidueVector& rv, Decode&& decode) {
  validate_residues(profile, rv);
  if (!rv.has_erasures()) return decode(profile, rv);
  auto survivors = drop_erasures(profile, rv);
  if (!survivors) {
    auto out = DecodeOutcome::failure(FailureReason::kNoSurvivors);
    out.failed_checks.assign(rv.size(), -1);
    return out;
  }
  DecodeOutcome inner = decode(survivors->profile, survivors->rv);
  std::vector<int> checks(rv.size(), -1);
  for (std::size_t s = 0; s < survivors->original.size(); ++s) {
    if (s < inner.failed_checks.size()) checks[survivors->original[s]] = inner.failed_checks[s];
  }
  inner.failed_checks = std::move(checks);
  if (inner.reference_index) inner.reference_index = survivors->original[*inner.reference_index];
  return inner;
}

inline DecodeOutcome algorithm_one_clean(const CodeProfile& profile, const ResidueVector& rv, std::size_t ref) {
  const auto& F = profile.field();
  const auto& der = profile.derived[ref];
  const Polynomial& r_ref = rv.at(ref);
  Polynomial k(F);
  if (der.code) {
    std::vector<Polynomial> xi;
    xi.reserve(der.indices.size());
    for (auto j : der.indices) {
      const Polynomial diff = rv.at(j) - r_ref;
      const Polynomial& g = profile.d(ref, j);
      // q_hat = (diff - [diff]_g) / g, exact division.
      const Polynomial q_hat = g.deg_or_minus_one() >= 1 ? diff / g : diff;
      xi.push_back((q_hat * profile.gamma_inverse[ref][j]) % profile.gamma_matrix[j][ref]);
    }
    auto inner = classic_decode_code(*der.code, xi);
    if (!inner.ok()) {
      auto out = DecodeOutcome::failure(*inner.failure_reason);
      out.reference_index = ref;
      return out;
    }
    k = std::move(*inner.reconstruction);
  }
  return DecodeOutcome::success(DecodeStatus::kRobust, k * profile.modulus(ref) + r_ref, ref);
}

inline void attach_checks(const CodeProfile& profile, const ResidueVector& rv, DecodeOutcome& out) {
  out.failed_checks = failed_check_counts(profile.code, received(rv));
}

}  // namespace detail

inline DecodeOutcome classic_decode(const CodeProfile& profile, const ResidueVector& rv) {
  return detail::with_erasures(profile, rv, [](const CodeProfile& p, const ResidueVector& r) {
    return detail::classic_decode_code(p.code, detail::received(r));
  });
}

/// Robust reconstruction from reference `ref`: status Robust with deg(a_hat - a) <= deg(e_ref)
/// whenever the folding polynomial k_ref is recovered.
inline DecodeOutcome algorithm_one(const CodeProfile& profile, const ResidueVector& rv, std::size_t ref) {
  if (ref >= profile.size()) throw Error(ErrorCode::kOutOfRange, "reference index " + std::to_string(ref));
  if (ref < rv.size() && rv.is_erased(ref)) {
    throw Error(ErrorCode::kErasedOperand, "reference residue " + std::to_string(ref) + " is erased");
  }
  return detail::with_erasures(profile, rv, [&](const CodeProfile& p, const ResidueVector& r) {
    std::size_t local = ref;
    if (&p != &profile) {
      local = 0;
      for (std::size_t i = 0; i < ref; ++i) local += rv.is_erased(i) ? 0 : 1;
    }
    auto out = detail::algorithm_one_clean(p, r, local);
    detail::attach_checks(p, r, out);
    return out;
  });
}

inline DecodeOutcome robust_decode(const CodeProfile& profile, const ResidueVector& rv) {
  return detail::with_erasures(profile, rv, [](const CodeProfile& p, const ResidueVector& r) {
    auto out = detail::algorithm_one_clean(p, r, compute_bounds(p).best_reference);
    detail::attach_checks(p, r, out);
    return out;
  });
}

/// Reconstruction within degree `lambda` of a under <= A unrestricted errors and any number of
/// errors of degree <= lambda. Requires d >= 3 and lambda < lambda_bound.
inline DecodeOutcome mixed_decode(const CodeProfile& profile, const ResidueVector& rv, int lambda) {
  return detail::with_erasures(profile, rv, [lambda](const CodeProfile& p, const ResidueVector& r) {
    if (p.code_distance() < 3) {
      throw Error(ErrorCode::kContractViolation,
                  "mixed decoding needs code distance >= 3, got " + std::to_string(p.code_distance()));
    }
    const auto bounds = compute_bounds(p);
    if (lambda < 0 || lambda >= bounds.lambda_bound) {
      throw Error(ErrorCode::kContractViolation, "lambda must satisfy 0 <= lambda < " +
                                                     std::to_string(bounds.lambda_bound) + ", got " +
                                                     std::to_string(lambda));
    }
    const int A = p.correctable();
    const auto order = reference_order(p);
    std::vector<std::pair<std::size_t, Polynomial>> found;
    for (std::size_t s = 0; s < static_cast<std::size_t>(2 * A + 1); ++s) {
      auto one = detail::algorithm_one_clean(p, r, order[s]);
      if (one.ok()) found.emplace_back(order[s], std::move(*one.reconstruction));
    }
    const std::size_t n = found.size();
    std::vector<std::uint32_t> adjacent(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if ((found[i].second - found[j].second).degree() <= lambda) {
          adjacent[i] |= 1u << j;
          adjacent[j] |= 1u << i;
        }
      }
    }
    // Exhaustive clique search; closeness is not transitive.
    std::optional<std::size_t> pick;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) < A + 1) continue;
      bool clique = true;
      for (std::size_t i = 0; i < n && clique; ++i) {
        if ((mask >> i & 1u) && (mask & ~adjacent[i] & ~(1u << i))) clique = false;
      }
      if (!clique) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i & 1u) && (!pick || found[i].first < found[*pick].first)) pick = i;
      }
    }
    DecodeOutcome out = pick ? DecodeOutcome::success(DecodeStatus::kRobust, found[*pick].second, found[*pick].first)
                             : DecodeOutcome::failure(FailureReason::kNoCluster);
    detail::attach_checks(p, r, out);
    return out;
  });
}

/// Exact decoding of <= A unrestricted plus <= B(theta) errors of degree < eta(theta).
inline DecodeOutcome combined_decode(const CodeProfile& profile, const ResidueVector& rv, int theta) {
  return detail::with_erasures(profile, rv, [theta](const CodeProfile& p, const ResidueVector& r) {
    const int L = static_cast<int>(p.size());
    const int A = p.correctable();
    if (theta < 1 || theta > L - 2 * A) {
      throw Error(ErrorCode::kContractViolation,
                  "theta must lie in [1, " + std::to_string(L - 2 * A) + "], got " + std::to_string(theta));
    }
    const auto order = reference_order(p);
    const std::size_t refs = static_cast<std::size_t>(L - theta + 1);
    const int needed = (L - theta + 1) / 2 + 1;  // ceil((L - theta) / 2) + 1
    std::vector<std::pair<std::size_t, Polynomial>> found;
    for (std::size_t s = 0; s < refs; ++s) {
      auto one = detail::algorithm_one_clean(p, r, order[s]);
      if (one.ok()) found.emplace_back(order[s], std::move(*one.reconstruction));
    }
    DecodeOutcome out = DecodeOutcome::failure(FailureReason::kNoMajority);
    if (static_cast<int>(found.size()) >= needed) {
      for (std::size_t i = 0; i < found.size(); ++i) {
        int votes = 0;
        std::size_t lowest = found[i].first;
        for (const auto& [ref, value] : found) {
          if (value == found[i].second) {
            ++votes;
            lowest = std::min(lowest, ref);
          }
        }
        if (votes >= needed) {
          out = DecodeOutcome::success(DecodeStatus::kExact, found[i].second, lowest);
          break;
        }
      }
    }
    detail::attach_checks(p, r, out);
    return out;
  });
}

/// a_hat - [a_hat]_G: strips a reconstruction error of degree < deg(G) from a multiple of G.
inline Polynomial product_refine(const Polynomial& a_hat, const Polynomial& generator) {
  return a_hat - a_hat % generator;
}

}  // namespace polyrc
