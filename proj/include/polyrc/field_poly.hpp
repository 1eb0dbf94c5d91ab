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

// Dense polynomials over a prime field GF(p), p < 2^16, with the Euclidean
// toolkit (divmod, gcd, xgcd, lcm, modular inverse), a trial-division
// factorizer used as a test oracle, and gcd-free (coprime) basis refinement.

#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyrc/error.hpp"

namespace polyrc {

class PrimeField {
 public:
  using Element = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p < 2 || p >= (1u << 16)) {
      throw Error(ErrorCode::kInvalidField, "p must satisfy 2 <= p < 65536, got " + std::to_string(p));
    }
    for (std::uint32_t q = 2; q * q <= p; ++q) {
      if (p % q == 0) throw Error(ErrorCode::kInvalidField, std::to_string(p) + " is not prime");
    }
  }

  std::uint32_t modulus() const noexcept { return p_; }

  Element reduce(long long v) const noexcept {
    long long r = v % static_cast<long long>(p_);
    return static_cast<Element>(r < 0 ? r + p_ : r);
  }
  Element add(Element a, Element b) const noexcept {
    Element s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Element mul(Element a, Element b) const noexcept {
    return static_cast<Element>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Element pow(Element a, std::uint64_t e) const noexcept {
    Element result = 1;
    while (e > 0) {
      if (e & 1u) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }
  Element inv(Element a) const {
    if (a == 0) throw Error(ErrorCode::kDivisionByZero, "inverse of zero in GF(" + std::to_string(p_) + ")");
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

/// Polynomial degree with deg(0) = -infinity.
class Degree {
 public:
  constexpr Degree(int value) : finite_(true), value_(value) {}  // NOLINT(google-explicit-constructor)

  static constexpr Degree neg_infinity() { return Degree(); }

  constexpr bool is_neg_infinity() const { return !finite_; }
  int value() const {
    if (!finite_) throw Error(ErrorCode::kOutOfRange, "degree of the zero polynomial has no integer value");
    return value_;
  }
  /// -1 for the zero polynomial; convenient for loop bounds.
  constexpr int value_or_minus_one() const { return finite_ ? value_ : -1; }

  friend constexpr bool operator==(Degree a, Degree b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr Degree operator+(Degree a, Degree b) {
    if (!a.finite_ || !b.finite_) return neg_infinity();
    return Degree(a.value_ + b.value_);
  }
  friend std::ostream& operator<<(std::ostream& os, Degree d) {
    if (!d.finite_) return os << "-inf";
    return os << d.value_;
  }

 private:
  constexpr Degree() : finite_(false), value_(0) {}
  bool finite_;
  int value_;
};

class Polynomial {
 public:
  using Element = PrimeField::Element;

  explicit Polynomial(PrimeField field) : field_(field) {}

  /// Coefficients low-order first; values are reduced mod p and may be negative.
  Polynomial(PrimeField field, std::initializer_list<long long> coeffs) : field_(field) {
    coeffs_.reserve(coeffs.size());
    for (long long c : coeffs) coeffs_.push_back(field_.reduce(c));
    trim();
  }

  Polynomial(PrimeField field, std::vector<Element> coeffs) : field_(field), coeffs_(std::move(coeffs)) {
    for (auto& c : coeffs_) c %= field_.modulus();
    trim();
  }

  static Polynomial constant(PrimeField field, long long c) { return Polynomial(field, {c}); }
  static Polynomial one(PrimeField field) { return constant(field, 1); }
  /// c * x^n
  static Polynomial monomial(PrimeField field, long long c, std::size_t n) {
    std::vector<Element> coeffs(n + 1, 0);
    coeffs[n] = field.reduce(c);
    return Polynomial(field, std::move(coeffs));
  }

  const PrimeField& field() const noexcept { return field_; }
  std::span<const Element> coeffs() const noexcept { return coeffs_; }
  /// Number of stored coefficients (deg + 1, or 0 for the zero polynomial).
  std::size_t size() const noexcept { return coeffs_.size(); }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_one() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  Degree degree() const noexcept {
    return coeffs_.empty() ? Degree::neg_infinity() : Degree(static_cast<int>(coeffs_.size()) - 1);
  }
  int deg_or_minus_one() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  Element coeff(std::size_t j) const noexcept { return j < coeffs_.size() ? coeffs_[j] : 0; }
  Element leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }

  Polynomial monic() const {
    if (is_zero()) return *this;
    return scaled(field_.inv(leading()));
  }

  Polynomial scaled(Element s) const {
    std::vector<Element> out(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) out[j] = field_.mul(coeffs_[j], s);
    return Polynomial(field_, std::move(out));
  }

  Polynomial operator-() const {
    std::vector<Element> out(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) out[j] = field_.neg(coeffs_[j]);
    return Polynomial(field_, std::move(out));
  }

  friend Polynomial operator+(const Polynomial& f, const Polynomial& g) {
    f.require_same_field(g);
    std::vector<Element> out(std::max(f.size(), g.size()));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f.field_.add(f.coeff(j), g.coeff(j));
    return Polynomial(f.field_, std::move(out));
  }

  friend Polynomial operator-(const Polynomial& f, const Polynomial& g) {
    f.require_same_field(g);
    std::vector<Element> out(std::max(f.size(), g.size()));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f.field_.sub(f.coeff(j), g.coeff(j));
    return Polynomial(f.field_, std::move(out));
  }

  friend Polynomial operator*(const Polynomial& f, const Polynomial& g) {
    f.require_same_field(g);
    if (f.is_zero() || g.is_zero()) return Polynomial(f.field_);
    const std::uint64_t p = f.field_.modulus();
    std::vector<std::uint64_t> acc(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < g.size(); ++j) {
        acc[i + j] += static_cast<std::uint64_t>(f.coeffs_[i]) * g.coeffs_[j];
      }
    }
    std::vector<Element> out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<Element>(acc[k] % p);
    return Polynomial(f.field_, std::move(out));
  }

  Polynomial& operator+=(const Polynomial& g) { return *this = *this + g; }
  Polynomial& operator-=(const Polynomial& g) { return *this = *this - g; }
  Polynomial& operator*=(const Polynomial& g) { return *this = *this * g; }

  friend bool operator==(const Polynomial& f, const Polynomial& g) noexcept {
    return f.field_ == g.field_ && f.coeffs_ == g.coeffs_;
  }

  /// Total order: by degree, then by coefficients from the top down.
  friend bool operator<(const Polynomial& f, const Polynomial& g) noexcept {
    if (f.size() != g.size()) return f.size() < g.size();
    for (std::size_t j = f.size(); j-- > 0;) {
      if (f.coeffs_[j] != g.coeffs_[j]) return f.coeffs_[j] < g.coeffs_[j];
    }
    return false;
  }

  void require_same_field(const Polynomial& g) const {
    if (!(field_ == g.field_)) {
      throw Error(ErrorCode::kFieldMismatch, "GF(" + std::to_string(field_.modulus()) + ") vs GF(" +
                                                 std::to_string(g.field_.modulus()) + ")");
    }
  }

 private:
  void trim() noexcept {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  PrimeField field_;
  std::vector<Element> coeffs_;
};

/// Low-order-first comma list, `0` for the zero polynomial.
inline std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(f.coeff(j));
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& f) { return os << to_string(f); }

/// Parses the low-order-first comma format. Trailing zeros are rejected except the literal `0`.
inline Polynomial parse_polynomial(PrimeField field, std::string_view text) {
  std::vector<PrimeField::Element> coeffs;
  std::string token;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, token, ',')) {
    auto first = token.find_first_not_of(" \t");
    auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw Error(ErrorCode::kParseError, "empty coefficient in '" + std::string(text) + "'");
    token = token.substr(first, last - first + 1);
    if (token.find_first_not_of("0123456789") != std::string::npos || token.size() > 9) {
      throw Error(ErrorCode::kParseError, "bad coefficient '" + token + "'");
    }
    unsigned long v = std::stoul(token);
    if (v >= field.modulus()) {
      throw Error(ErrorCode::kParseError, "coefficient " + token + " not in [0, " + std::to_string(field.modulus()) + ")");
    }
    coeffs.push_back(static_cast<PrimeField::Element>(v));
  }
  if (coeffs.empty()) throw Error(ErrorCode::kParseError, "empty polynomial literal");
  if (coeffs.size() > 1 && coeffs.back() == 0) {
    throw Error(ErrorCode::kParseError, "non-canonical literal '" + std::string(text) + "' (trailing zero)");
  }
  return Polynomial(field, std::move(coeffs));
}

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

inline DivMod divmod(const Polynomial& f, const Polynomial& g) {
  f.require_same_field(g);
  if (g.is_zero()) throw Error(ErrorCode::kDivisionByZero, "division by the zero polynomial");
  const PrimeField& F = f.field();
  if (f.size() < g.size()) return {Polynomial(F), f};
  std::vector<PrimeField::Element> rem(f.coeffs().begin(), f.coeffs().end());
  std::vector<PrimeField::Element> quo(f.size() - g.size() + 1, 0);
  const auto lead_inv = F.inv(g.leading());
  const std::size_t dg = g.size() - 1;
  for (std::size_t k = quo.size(); k-- > 0;) {
    auto c = F.mul(rem[k + dg], lead_inv);
    quo[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dg; ++j) rem[k + j] = F.sub(rem[k + j], F.mul(c, g.coeff(j)));
  }
  rem.resize(dg);
  return {Polynomial(F, std::move(quo)), Polynomial(F, std::move(rem))};
}

inline Polynomial operator%(const Polynomial& f, const Polynomial& g) { return divmod(f, g).remainder; }
inline Polynomial operator/(const Polynomial& f, const Polynomial& g) { return divmod(f, g).quotient; }

inline bool divides(const Polynomial& g, const Polynomial& f) { return (f % g).is_zero(); }

inline Polynomial pow(const Polynomial& f, unsigned e) {
  Polynomial result = Polynomial::one(f.field());
  Polynomial base = f;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

inline Polynomial gcd_monic(const Polynomial& f, const Polynomial& g) {
  f.require_same_field(g);
  if (f.is_zero() && g.is_zero()) throw Error(ErrorCode::kGcdUndefined, "gcd(0, 0)");
  Polynomial a = f;
  Polynomial b = g;
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

struct Bezout {
  Polynomial gcd;
  Polynomial u;  ///< coefficient of f
  Polynomial v;  ///< coefficient of g
};

/// u*f + v*g = gcd(f, g), gcd monic, cofactors of minimal degree.
inline Bezout xgcd(const Polynomial& f, const Polynomial& g) {
  f.require_same_field(g);
  if (f.is_zero() && g.is_zero()) throw Error(ErrorCode::kGcdUndefined, "xgcd(0, 0)");
  const PrimeField& F = f.field();
  Polynomial r0 = f, r1 = g;
  Polynomial s0 = Polynomial::one(F), s1(F);
  Polynomial t0(F), t1 = Polynomial::one(F);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    Polynomial s2 = s0 - q * s1;
    Polynomial t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  const auto scale = F.inv(r0.leading());
  return {r0.scaled(scale), s0.scaled(scale), t0.scaled(scale)};
}

inline Polynomial lcm_monic(std::span<const Polynomial> fs) {
  if (fs.empty()) throw Error(ErrorCode::kEmptyInput, "lcm of an empty list");
  Polynomial acc = Polynomial::one(fs.front().field());
  for (const auto& f : fs) {
    if (f.is_zero()) throw Error(ErrorCode::kZeroInput, "lcm with a zero polynomial");
    acc = ((acc * f) / gcd_monic(acc, f)).monic();
  }
  return acc;
}

/// g with f*g = 1 mod m and deg(g) < deg(m).
inline Polynomial inv_mod(const Polynomial& f, const Polynomial& m) {
  if (m.deg_or_minus_one() < 1) throw Error(ErrorCode::kOutOfRange, "inv_mod needs deg(m) >= 1");
  Polynomial reduced = f % m;
  if (reduced.is_zero()) throw Error(ErrorCode::kNotCoprime, "inverse of a multiple of the modulus");
  auto bz = xgcd(reduced, m);
  if (!bz.gcd.is_one()) {
    throw Error(ErrorCode::kNotCoprime, "gcd(" + to_string(f) + ", " + to_string(m) + ") = " + to_string(bz.gcd));
  }
  return bz.u % m;
}

struct FactorPower {
  Polynomial factor;  ///< monic irreducible
  unsigned exponent;
};

inline constexpr std::uint64_t kDefaultFactorBudget = 10'000'000;

/// Irreducible factorization by trial division over monic candidates of ascending degree.
/// Desk-scale only: requires p^ceil(deg/2) <= budget.
inline std::vector<FactorPower> factorize_trial(const Polynomial& f, std::uint64_t budget = kDefaultFactorBudget) {
  const int n = f.deg_or_minus_one();
  if (n < 1) throw Error(ErrorCode::kOutOfRange, "factorize_trial needs deg(f) >= 1");
  const PrimeField& F = f.field();
  const std::uint64_t p = F.modulus();
  std::uint64_t span = 1;
  for (int k = 0; k < (n + 1) / 2; ++k) {
    span *= p;
    if (span > budget) {
      throw Error(ErrorCode::kBudgetExceeded, "p^ceil(deg/2) exceeds enumeration budget " + std::to_string(budget));
    }
  }

  std::vector<FactorPower> out;
  Polynomial rest = f.monic();
  for (int d = 1; 2 * d <= rest.deg_or_minus_one(); ++d) {
    // Monic candidates of degree d enumerated as base-p counters over the low coefficients.
    std::vector<PrimeField::Element> digits(d, 0);
    while (true) {
      std::vector<PrimeField::Element> coeffs(digits);
      coeffs.push_back(1);
      Polynomial cand(F, std::move(coeffs));
      unsigned e = 0;
      while (rest.deg_or_minus_one() >= d) {
        auto [q, r] = divmod(rest, cand);
        if (!r.is_zero()) break;
        rest = std::move(q);
        ++e;
      }
      if (e > 0) out.push_back({std::move(cand), e});
      if (2 * d > rest.deg_or_minus_one()) break;
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
      if (k == digits.size()) break;
    }
  }
  if (rest.deg_or_minus_one() >= 1) {
    auto it = std::find_if(out.begin(), out.end(), [&](const FactorPower& fp) { return fp.factor == rest; });
    if (it != out.end()) {
      ++it->exponent;
    } else {
      out.push_back({rest, 1});
    }
  }
  std::sort(out.begin(), out.end(), [](const FactorPower& a, const FactorPower& b) { return a.factor < b.factor; });
  return out;
}

/// Pairwise-coprime monic elements plus the exponent of each element in each input.
struct CoprimeBasis {
  std::vector<Polynomial> elements;
  std::vector<std::vector<unsigned>> exponents;  ///< [input][element]
};

/// Refines inputs into a gcd-free basis by repeated gcd splitting.
inline CoprimeBasis coprime_refine(std::span<const Polynomial> fs) {
  if (fs.empty()) throw Error(ErrorCode::kEmptyInput, "coprime_refine of an empty list");
  std::vector<Polynomial> basis;
  for (const auto& f : fs) {
    if (f.deg_or_minus_one() < 1) throw Error(ErrorCode::kOutOfRange, "coprime_refine inputs need degree >= 1");
    std::vector<Polynomial> work{f.monic()};
    while (!work.empty()) {
      Polynomial a = std::move(work.back());
      work.pop_back();
      if (a.deg_or_minus_one() < 1) continue;
      bool split = false;
      for (std::size_t k = 0; k < basis.size(); ++k) {
        Polynomial g = gcd_monic(a, basis[k]);
        if (g.is_one()) continue;
        Polynomial b = std::move(basis[k]);
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(k));
        work.push_back(b / g);
        work.push_back(a / g);
        work.push_back(std::move(g));
        split = true;
        break;
      }
      if (!split) basis.push_back(std::move(a));
    }
  }
  std::sort(basis.begin(), basis.end());

  CoprimeBasis out;
  out.exponents.assign(fs.size(), std::vector<unsigned>(basis.size(), 0));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    Polynomial rest = fs[i].monic();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      while (true) {
        auto [q, r] = divmod(rest, basis[k]);
        if (!r.is_zero()) break;
        rest = std::move(q);
        ++out.exponents[i][k];
      }
    }
  }
  out.elements = std::move(basis);
  return out;
}

}  // namespace polyrc
