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

// Transmission of residue vectors over a symbol channel: frame layout,
// error injection, Monte Carlo sweeps and the matching analytic bounds.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "polyrc/decoders.hpp"
#include "polyrc/error.hpp"
#include "polyrc/field_poly.hpp"
#include "polyrc/remainder_code.hpp"

namespace polyrc {

using Symbol = PrimeField::Element;
using SymbolStream = std::vector<Symbol>;

/// Residue i occupies positions [offsets[i], offsets[i] + lengths[i]), lengths[i] = deg(m_i).
struct FrameLayout {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> lengths;
  std::size_t total = 0;

  static FrameLayout of(const CodeProfile& profile) {
    FrameLayout layout;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      layout.offsets.push_back(layout.total);
      layout.lengths.push_back(static_cast<std::size_t>(profile.modulus(i).deg_or_minus_one()));
      layout.total += layout.lengths.back();
    }
    return layout;
  }

  std::size_t segment_of(std::size_t position) const {
    if (position >= total) throw Error(ErrorCode::kOutOfRange, "position " + std::to_string(position));
    auto it = std::upper_bound(offsets.begin(), offsets.end(), position);
    return static_cast<std::size_t>(it - offsets.begin()) - 1;
  }
};

/// splitmix64 finalizer; derives independent per-trial seeds from counters.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  return mix64(mix64(mix64(mix64(seed) ^ a) ^ b) ^ c);
}

/// mt19937_64 with portable bounded-integer and unit-interval draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n), n >= 1, by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct RandomSymbolModel {};
struct BurstModel {
  std::size_t width = 1;
};
struct ScriptedModel {
  SymbolStream delta;  ///< added position-wise mod p
};

struct ChannelSpec {
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::variant<RandomSymbolModel, BurstModel, ScriptedModel> model = RandomSymbolModel{};
};

/// Residue coefficients low-order first, zero-padded to deg(m_i), residues in index order.
inline SymbolStream serialize(const CodeProfile& profile, const ResidueVector& rv) {
  validate_residues(profile, rv);
  const auto layout = FrameLayout::of(profile);
  SymbolStream stream(layout.total, 0);
  for (std::size_t i = 0; i < rv.size(); ++i) {
    const auto& r = rv.at(i);
    for (std::size_t j = 0; j < r.size(); ++j) stream[layout.offsets[i] + j] = r.coeff(j);
  }
  return stream;
}

inline ResidueVector deserialize(const CodeProfile& profile, const SymbolStream& stream) {
  const auto layout = FrameLayout::of(profile);
  if (stream.size() != layout.total) {
    throw Error(ErrorCode::kLengthMismatch,
                "stream has " + std::to_string(stream.size()) + " symbols, frame needs " + std::to_string(layout.total));
  }
  ResidueVector rv;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    auto first = stream.begin() + static_cast<std::ptrdiff_t>(layout.offsets[i]);
    SymbolStream coeffs(first, first + static_cast<std::ptrdiff_t>(layout.lengths[i]));
    for (auto c : coeffs) {
      if (c >= profile.field().modulus()) throw Error(ErrorCode::kOutOfRange, "symbol outside the field");
    }
    rv.residues.emplace_back(Polynomial(profile.field(), std::move(coeffs)));
  }
  return rv;
}

/// Each symbol independently replaced, with probability gamma, by a uniformly random different symbol.
inline SymbolStream inject_random(SymbolStream stream, const PrimeField& field, double gamma, Rng& rng) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::kOutOfRange, "gamma must lie in [0, 1]");
  const std::uint32_t p = field.modulus();
  for (auto& s : stream) {
    if (rng.uniform01() < gamma) s = static_cast<Symbol>((s + 1 + rng.below(p - 1)) % p);
  }
  return stream;
}

inline SymbolStream inject_random(SymbolStream stream, const PrimeField& field, const ChannelSpec& spec) {
  if (!std::holds_alternative<RandomSymbolModel>(spec.model)) {
    throw Error(ErrorCode::kContractViolation, "inject_random needs the RandomSymbol model");
  }
  Rng rng(spec.seed);
  return inject_random(std::move(stream), field, spec.gamma, rng);
}

inline SymbolStream apply_delta(SymbolStream stream, const SymbolStream& delta, const PrimeField& field) {
  if (delta.size() != stream.size()) throw Error(ErrorCode::kLengthMismatch, "delta length differs from stream");
  for (std::size_t k = 0; k < stream.size(); ++k) stream[k] = field.add(stream[k], delta[k] % field.modulus());
  return stream;
}

/// Nonzero error with deg <= max_deg for residue i.
inline Polynomial make_bounded_error(const CodeProfile& profile, std::size_t i, int max_deg, Rng& rng) {
  if (max_deg < 0 || max_deg >= profile.modulus(i).deg_or_minus_one()) {
    throw Error(ErrorCode::kOutOfRange, "bounded error degree must satisfy 0 <= max_deg < deg(m_i)");
  }
  const std::uint32_t p = profile.field().modulus();
  while (true) {
    std::vector<Symbol> coeffs(static_cast<std::size_t>(max_deg) + 1);
    for (auto& c : coeffs) c = static_cast<Symbol>(rng.below(p));
    Polynomial e(profile.field(), std::move(coeffs));
    if (!e.is_zero()) return e;
  }
}

/// Nonzero error with deg < deg(m_i).
inline Polynomial make_unrestricted_error(const CodeProfile& profile, std::size_t i, Rng& rng) {
  return make_bounded_error(profile, i, profile.modulus(i).deg_or_minus_one() - 1, rng);
}

/// Additive delta over [start, start + width): end positions nonzero, interior uniform.
inline SymbolStream make_burst(const FrameLayout& layout, const PrimeField& field, std::size_t start, std::size_t width,
                               Rng& rng) {
  if (width < 1 || start + width > layout.total) {
    throw Error(ErrorCode::kOutOfRange, "burst [" + std::to_string(start) + ", " + std::to_string(start + width) +
                                            ") outside frame of " + std::to_string(layout.total));
  }
  const std::uint32_t p = field.modulus();
  SymbolStream delta(layout.total, 0);
  for (std::size_t k = start; k < start + width; ++k) {
    const bool edge = k == start || k + 1 == start + width;
    delta[k] = edge ? static_cast<Symbol>(1 + rng.below(p - 1)) : static_cast<Symbol>(rng.below(p));
  }
  return delta;
}

/// Applies any channel model; burst placement is uniform over admissible starts.
inline SymbolStream transmit(const SymbolStream& stream, const FrameLayout& layout, const PrimeField& field,
                             const ChannelSpec& spec, Rng& rng) {
  if (std::holds_alternative<RandomSymbolModel>(spec.model)) return inject_random(stream, field, spec.gamma, rng);
  if (const auto* burst = std::get_if<BurstModel>(&spec.model)) {
    if (burst->width < 1 || burst->width > layout.total) throw Error(ErrorCode::kOutOfRange, "burst width");
    const auto start = static_cast<std::size_t>(rng.below(layout.total - burst->width + 1));
    return apply_delta(stream, make_burst(layout, field, start, burst->width, rng), field);
  }
  return apply_delta(stream, std::get<ScriptedModel>(spec.model).delta, field);
}

struct AnalyticBounds {
  int eta = 0;                  ///< low-order positions a bounded error may touch
  std::vector<double> p_m;      ///< residue error probability per modulus
  std::vector<double> q_m;      ///< bounded residue error probability per modulus
  double p_c = 0;               ///< all residues correct
  double p_c_prime = 0;         ///< 1..A residues in error
  double bound_classic = 0;     ///< 1 - p_c - p_c_prime
  double p_bar_c = 0;           ///< no unrestricted and <= beta bounded errors
  double p_bar_c_prime = 0;     ///< 1..A unrestricted, <= beta errors in total
  double bound_combined = 0;    ///< 1 - p_bar_c - p_bar_c_prime
};

/// Probability that a residue of m symbols is received in error.
inline double residue_error_probability(int m, double gamma) { return 1.0 - std::pow(1.0 - gamma, m); }

/// Probability that only the eta low-order symbols of an m-symbol residue are hit, and at least one is.
inline double bounded_error_probability(int m, int eta, double gamma) {
  return std::pow(1.0 - gamma, std::max(0, m - eta)) - std::pow(1.0 - gamma, m);
}

inline AnalyticBounds analytic_bounds(const CodeProfile& profile, double gamma, int theta) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::kOutOfRange, "gamma must lie in [0, 1]");
  const auto bounds = compute_bounds(profile);
  const std::size_t L = profile.size();
  const int A = profile.correctable();
  const int beta = (static_cast<int>(L) - theta) / 2;

  AnalyticBounds out;
  out.eta = bounds.eta_bound(theta);
  std::vector<double> clean(L), bounded(L), unrestricted(L);
  for (std::size_t i = 0; i < L; ++i) {
    const int m = profile.modulus(i).deg_or_minus_one();
    out.p_m.push_back(residue_error_probability(m, gamma));
    out.q_m.push_back(bounded_error_probability(m, out.eta, gamma));
    clean[i] = 1.0 - out.p_m.back();
    bounded[i] = out.q_m.back();
    unrestricted[i] = out.p_m.back() - out.q_m.back();
  }

  // dist[u][b]: probability of u unrestricted and b bounded residue errors so far.
  std::vector<std::vector<double>> dist(L + 1, std::vector<double>(L + 1, 0.0));
  dist[0][0] = 1.0;
  for (std::size_t i = 0; i < L; ++i) {
    std::vector<std::vector<double>> next(L + 1, std::vector<double>(L + 1, 0.0));
    for (std::size_t u = 0; u <= i; ++u) {
      for (std::size_t b = 0; u + b <= i; ++b) {
        const double w = dist[u][b];
        if (w == 0.0) continue;
        next[u][b] += w * clean[i];
        next[u][b + 1] += w * bounded[i];
        next[u + 1][b] += w * unrestricted[i];
      }
    }
    dist = std::move(next);
  }
  out.p_c = dist[0][0];
  for (std::size_t u = 0; u <= L; ++u) {
    for (std::size_t b = 0; u + b <= L; ++b) {
      const auto errors = static_cast<int>(u + b);
      if (errors >= 1 && errors <= A) out.p_c_prime += dist[u][b];
      if (errors <= beta) {
        if (u == 0) {
          out.p_bar_c += dist[u][b];
        } else if (static_cast<int>(u) <= A) {
          out.p_bar_c_prime += dist[u][b];
        }
      }
    }
  }
  out.bound_classic = std::clamp(1.0 - out.p_c - out.p_c_prime, 0.0, 1.0);
  out.bound_combined = std::clamp(1.0 - out.p_bar_c - out.p_bar_c_prime, 0.0, 1.0);
  return out;
}

struct ExperimentRecord {
  double gamma = 0;
  std::uint64_t trials = 0;
  std::uint64_t uncorrected_classic = 0;
  std::uint64_t uncorrected_combined = 0;
  double bound_classic = 0;
  double bound_combined = 0;
  int theta = 1;
  std::uint64_t seed = 0;
};

inline Polynomial random_message(const CodeProfile& profile, Rng& rng) {
  const auto n = static_cast<std::size_t>(profile.lcm().deg_or_minus_one());
  std::vector<Symbol> coeffs(n);
  for (auto& c : coeffs) c = static_cast<Symbol>(rng.below(profile.field().modulus()));
  return Polynomial(profile.field(), std::move(coeffs));
}

inline bool recovered(const DecodeOutcome& out, const Polynomial& a) {
  return out.ok() && out.reconstruction && *out.reconstruction == a;
}

/// Monte Carlo sweep: every trial draws its own stream from (seed, gamma index, trial index),
/// so the tallies do not depend on evaluation order.
inline std::vector<ExperimentRecord> run_experiment(const CodeProfile& profile, std::vector<double> gammas,
                                                    std::uint64_t trials, int theta, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::kOutOfRange, "trials must be >= 1");
  compute_bounds(profile).eta_bound(theta);
  std::sort(gammas.begin(), gammas.end());
  const auto layout = FrameLayout::of(profile);
  std::vector<ExperimentRecord> records;
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const auto analytic = analytic_bounds(profile, gammas[g], theta);
    ExperimentRecord rec{gammas[g], trials, 0, 0, analytic.bound_classic, analytic.bound_combined, theta, seed};
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, g, t));
      const Polynomial a = random_message(profile, rng);
      const auto sent = serialize(profile, encode(profile, a));
      const auto rv = deserialize(profile, inject_random(sent, profile.field(), gammas[g], rng));
      if (!recovered(classic_decode(profile, rv), a)) ++rec.uncorrected_classic;
      if (!recovered(combined_decode(profile, rv, theta), a)) ++rec.uncorrected_combined;
    }
    records.push_back(rec);
  }
  return records;
}

inline std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline constexpr const char* kExperimentCsvHeader =
    "gamma,trials,uncorrected_classic,uncorrected_combined,bound_classic,bound_combined,theta,seed";

inline std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = kExperimentCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += format_g6(r.gamma) + ',' + std::to_string(r.trials) + ',' + std::to_string(r.uncorrected_classic) + ',' +
           std::to_string(r.uncorrected_combined) + ',' + format_g6(r.bound_classic) + ',' +
           format_g6(r.bound_combined) + ',' + std::to_string(r.theta) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

struct BurstCapacity {
  int unrestricted = 0;    ///< A
  int bounded = 0;         ///< B(theta)
  int eta = 0;             ///< eta(theta) as a width
  int segment = 0;         ///< common modulus degree m
  int within_eta = 0;      ///< bursts of width <= eta
  int within_m_plus_eta = 0;  ///< bursts of width <= m + eta
};

/// Burst counts for a code correcting A unrestricted plus B bounded residue errors.
constexpr std::pair<int, int> burst_capacity_for(int A, int B) {
  const int short_bursts = A <= B ? A : B + (A - B) / 2;
  const int long_bursts = A / 2 <= B ? A / 2 : B + (A - 2 * B) / 3;
  return {short_bursts, long_bursts};
}

inline BurstCapacity burst_capacity(const CodeProfile& profile, int theta) {
  const int m = profile.modulus(0).deg_or_minus_one();
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile.modulus(i).deg_or_minus_one() != m) {
      throw Error(ErrorCode::kUnequalDegrees, "burst capacity needs moduli of equal degree");
    }
  }
  const auto bounds = compute_bounds(profile);
  BurstCapacity cap;
  cap.eta = bounds.eta_bound(theta);
  cap.unrestricted = profile.correctable();
  cap.bounded = (static_cast<int>(profile.size()) - theta) / 2 - cap.unrestricted;
  cap.segment = m;
  std::tie(cap.within_eta, cap.within_m_plus_eta) = burst_capacity_for(cap.unrestricted, cap.bounded);
  return cap;
}

struct BurstRecord {
  std::size_t width = 0;
  std::size_t placements = 0;
  std::uint64_t trials = 0;
  std::uint64_t recovered = 0;
};

/// One burst per frame at every admissible start, `trials` random contents each, decoded with combined_decode.
inline std::vector<BurstRecord> run_burst_experiment(const CodeProfile& profile, int theta,
                                                     const std::vector<std::size_t>& widths, std::uint64_t trials,
                                                     std::uint64_t seed) {
  const auto layout = FrameLayout::of(profile);
  std::vector<BurstRecord> out;
  for (auto width : widths) {
    if (width < 1 || width > layout.total) {
      throw Error(ErrorCode::kOutOfRange, "burst width " + std::to_string(width) + " outside [1, " +
                                              std::to_string(layout.total) + "]");
    }
    BurstRecord rec{width, layout.total - width + 1, 0, 0};
    for (std::size_t start = 0; start + width <= layout.total; ++start) {
      for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, width, start, t));
        const Polynomial a = random_message(profile, rng);
        const auto sent = serialize(profile, encode(profile, a));
        const auto hit = apply_delta(sent, make_burst(layout, profile.field(), start, width, rng), profile.field());
        ++rec.trials;
        if (recovered(combined_decode(profile, deserialize(profile, hit), theta), a)) ++rec.recovered;
      }
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace polyrc
