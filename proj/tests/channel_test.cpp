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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "polyrc/channel.hpp"
#include "test_support.hpp"

namespace polyrc {
namespace {

using testing::example1;
using testing::example2;
using testing::example3;

TEST(Frame, SerializeConstantMessage) {
  const auto& p = example3();
  auto stream = serialize(p, encode(p, Polynomial::one(p.field())));
  SymbolStream expected;
  for (int i = 0; i < 5; ++i) expected.insert(expected.end(), {1, 0, 0, 0});
  EXPECT_EQ(stream, expected);
}

TEST(Frame, RoundTripAndLayout) {
  std::mt19937_64 rng(1);
  for (const CodeProfile* p : {&example1(), &example2(), &example3()}) {
    auto layout = FrameLayout::of(*p);
    EXPECT_EQ(layout.offsets[1], static_cast<std::size_t>(p->modulus(0).deg_or_minus_one()));
    EXPECT_EQ(layout.segment_of(layout.offsets[1]), 1u);
    EXPECT_EQ(layout.segment_of(layout.offsets[1] - 1), 0u);
    for (int t = 0; t < 20; ++t) {
      auto rv = encode(*p, testing::random_message(*p, rng));
      EXPECT_EQ(deserialize(*p, serialize(*p, rv)), rv);
    }
    EXPECT_THROW(deserialize(*p, SymbolStream(layout.total + 1, 0)), Error);
  }
  const auto& p = example3();
  auto rv = encode(p, Polynomial::one(p.field()));
  rv.residues[0] = std::nullopt;
  EXPECT_THROW(serialize(p, rv), Error);
}

TEST(InjectRandom, ExtremeRates) {
  PrimeField F(5);
  SymbolStream s(1000);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = static_cast<Symbol>(k % 5);
  Rng rng(1);
  EXPECT_EQ(inject_random(s, F, 0.0, rng), s);
  auto all = inject_random(s, F, 1.0, rng);
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_NE(all[k], s[k]);
    EXPECT_LT(all[k], 5u);
  }
  EXPECT_THROW(inject_random(s, F, 1.5, rng), Error);
}

TEST(InjectRandom, FlipRate) {
  PrimeField F(5);
  SymbolStream s(1'000'000, 0);
  auto out = inject_random(s, F, ChannelSpec{0.1, 99, RandomSymbolModel{}});
  std::size_t flips = 0;
  std::map<Symbol, std::size_t> values;
  for (auto v : out) {
    if (v != 0) {
      ++flips;
      ++values[v];
    }
  }
  EXPECT_NEAR(static_cast<double>(flips) / 1e6, 0.1, 0.001);
  EXPECT_EQ(values.size(), 4u);
  EXPECT_EQ(inject_random(s, F, ChannelSpec{0.1, 99, RandomSymbolModel{}}), out);
}

TEST(BoundedError, DegreesAndCoverage) {
  const auto& p = example1();
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    auto e = make_bounded_error(p, 0, 0, rng);
    EXPECT_EQ(e.degree(), Degree(0));
  }
  std::map<int, int> degrees;
  for (int t = 0; t < 1000; ++t) {
    auto e = make_bounded_error(p, 2, 3, rng);
    ASSERT_FALSE(e.is_zero());
    EXPECT_LE(e.degree(), Degree(3));
    ++degrees[e.deg_or_minus_one()];
  }
  EXPECT_EQ(degrees.size(), 4u);
  // Leading degree 3 has probability 6/7 of the nonzero draws.
  EXPECT_GT(degrees[3], 800);
  EXPECT_THROW(make_bounded_error(p, 0, 12, rng), Error);
  auto u = make_unrestricted_error(p, 1, rng);
  EXPECT_LT(u.degree(), p.modulus(1).degree());
}

TEST(Burst, ShapeAndRange) {
  const auto& p = example3();
  auto layout = FrameLayout::of(p);
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    auto delta = make_burst(layout, p.field(), 6, 4, rng);
    for (std::size_t k = 0; k < delta.size(); ++k) {
      if (k < 6 || k >= 10) { EXPECT_EQ(delta[k], 0u); }
    }
    EXPECT_NE(delta[6], 0u);
    EXPECT_NE(delta[9], 0u);
  }
  EXPECT_THROW(make_burst(layout, p.field(), 18, 3, rng), Error);
  EXPECT_THROW(make_burst(layout, p.field(), 0, 0, rng), Error);
}

struct BurstFootprint {
  int full = 0;     ///< segments hit at a position >= eta
  int bounded = 0;  ///< segments hit only below eta
};

BurstFootprint footprint(const FrameLayout& layout, std::size_t start, std::size_t width, std::size_t eta) {
  std::map<std::size_t, std::size_t> highest;
  for (std::size_t k = start; k < start + width; ++k) {
    auto seg = layout.segment_of(k);
    highest[seg] = std::max(highest[seg], k - layout.offsets[seg]);
  }
  BurstFootprint f;
  for (auto [seg, top] : highest) (top >= eta ? f.full : f.bounded)++;
  return f;
}

TEST(Burst, PlacementScan) {
  const auto& p = example3();
  auto layout = FrameLayout::of(p);
  const auto eta = static_cast<std::size_t>(compute_bounds(p).eta_bound(1));
  const std::size_t m = 4;
  for (std::size_t width = 1; width <= m + eta; ++width) {
    for (std::size_t start = 0; start + width <= layout.total; ++start) {
      auto f = footprint(layout, start, width, eta);
      EXPECT_LE(f.full, 2);
      EXPECT_LE(f.bounded, 1);
      if (width <= eta) { EXPECT_LE(f.full, 1); }
    }
  }
  // Width eta at the end of segment 0: the next residue sees only low-order positions.
  auto f = footprint(layout, m - 1, eta, eta);
  EXPECT_EQ(f.full, 1);
  EXPECT_EQ(f.bounded, 1);
}

TEST(Transmit, ModelsDispatch) {
  const auto& p = example3();
  auto layout = FrameLayout::of(p);
  auto sent = serialize(p, encode(p, Polynomial(p.field(), {1, 2})));
  Rng rng(5);
  ChannelSpec burst{0.0, 0, BurstModel{3}};
  auto hit = transmit(sent, layout, p.field(), burst, rng);
  std::size_t first = layout.total, last = 0;
  for (std::size_t k = 0; k < hit.size(); ++k) {
    if (hit[k] != sent[k]) {
      first = std::min(first, k);
      last = k;
    }
  }
  EXPECT_EQ(last - first + 1, 3u);
  SymbolStream delta(layout.total, 0);
  delta[2] = 4;
  auto scripted = transmit(sent, layout, p.field(), ChannelSpec{0.0, 0, ScriptedModel{delta}}, rng);
  EXPECT_EQ(scripted[2], p.field().add(sent[2], 4));
}

TEST(Analytic, ResidueProbabilities) {
  EXPECT_NEAR(residue_error_probability(4, 0.1), 0.3439, 1e-12);
  EXPECT_NEAR(bounded_error_probability(4, 2, 0.1), 0.1539, 1e-12);
  auto zero = analytic_bounds(example3(), 0.0, 1);
  EXPECT_EQ(zero.p_c, 1.0);
  EXPECT_EQ(zero.bound_classic, 0.0);
  EXPECT_EQ(zero.bound_combined, 0.0);
}

/// Enumerates every clean / bounded / unrestricted pattern over the residues.
AnalyticBounds enumerate_bounds(const CodeProfile& p, double gamma, int theta) {
  const int L = static_cast<int>(p.size());
  const int A = p.correctable();
  const int beta = (L - theta) / 2;
  const int eta = compute_bounds(p).eta_bound(theta);
  AnalyticBounds out;
  int patterns = 1;
  for (int i = 0; i < L; ++i) patterns *= 3;
  for (int code = 0; code < patterns; ++code) {
    double prob = 1.0;
    int unrestricted = 0, bounded = 0;
    for (int i = 0, c = code; i < L; ++i, c /= 3) {
      const int m = p.modulus(static_cast<std::size_t>(i)).deg_or_minus_one();
      const double clean = std::pow(1.0 - gamma, m);
      const double low = std::pow(1.0 - gamma, std::max(0, m - eta)) - clean;
      switch (c % 3) {
        case 0: prob *= clean; break;
        case 1: prob *= low; ++bounded; break;
        default: prob *= 1.0 - clean - low; ++unrestricted; break;
      }
    }
    const int errors = unrestricted + bounded;
    if (errors == 0) out.p_c += prob;
    if (errors >= 1 && errors <= A) out.p_c_prime += prob;
    if (unrestricted == 0 && errors <= beta) out.p_bar_c += prob;
    if (unrestricted >= 1 && unrestricted <= A && errors <= beta) out.p_bar_c_prime += prob;
  }
  out.bound_classic = 1.0 - out.p_c - out.p_c_prime;
  out.bound_combined = 1.0 - out.p_bar_c - out.p_bar_c_prime;
  return out;
}

TEST(Analytic, MatchesEnumeration) {
  for (const CodeProfile* p : {&example2(), &example3()}) {
    const auto max_theta = compute_bounds(*p).max_theta();
    for (double gamma : {1e-3, 1e-2, 0.1, 0.4}) {
      for (int theta = 1; theta <= max_theta; ++theta) {
        auto got = analytic_bounds(*p, gamma, theta);
        auto want = enumerate_bounds(*p, gamma, theta);
        EXPECT_NEAR(got.p_c, want.p_c, 1e-12);
        EXPECT_NEAR(got.p_c_prime, want.p_c_prime, 1e-12);
        EXPECT_NEAR(got.p_bar_c, want.p_bar_c, 1e-12);
        EXPECT_NEAR(got.p_bar_c_prime, want.p_bar_c_prime, 1e-12);
        EXPECT_NEAR(got.bound_classic, want.bound_classic, 1e-12);
        EXPECT_NEAR(got.bound_combined, want.bound_combined, 1e-12);
      }
    }
  }
}

TEST(Analytic, ClosedFormForOneUnrestricted) {
  // Single-error sums written out directly for Example 3 (A = 1, beta = 2).
  const auto& p = example3();
  const double gamma = 0.03;
  const double pm = residue_error_probability(4, gamma);
  const double qm = bounded_error_probability(4, 3, gamma);
  const double c = 1.0 - pm;
  const double pc = std::pow(c, 5);
  const double pc1 = 5 * pm * std::pow(c, 4);
  const double pbar = pc + 5 * qm * std::pow(c, 4) + 10 * qm * qm * std::pow(c, 3);
  const double pbar1 = 5 * (pm - qm) * (std::pow(c, 4) + 4 * qm * std::pow(c, 3));
  auto got = analytic_bounds(p, gamma, 1);
  EXPECT_NEAR(got.bound_classic, 1 - pc - pc1, 1e-12);
  EXPECT_NEAR(got.bound_combined, 1 - pbar - pbar1, 1e-12);
}

TEST(Analytic, DominanceAndMonotonicity) {
  for (const CodeProfile* p : {&example1(), &example2(), &example3()}) {
    double prev_classic = 0, prev_combined = 0;
    for (double gamma = 1e-4; gamma < 1.0; gamma *= 1.5) {
      auto b = analytic_bounds(*p, gamma, 1);
      EXPECT_LE(b.bound_combined, b.bound_classic + 1e-15);
      EXPECT_GE(b.bound_classic, prev_classic - 1e-15);
      EXPECT_GE(b.bound_combined, prev_combined - 1e-15);
      prev_classic = b.bound_classic;
      prev_combined = b.bound_combined;
    }
  }
}

TEST(Experiment, ZeroGammaAndDeterminism) {
  const auto& p = example3();
  auto zero = run_experiment(p, {0.0}, 200, 1, 3);
  EXPECT_EQ(zero[0].uncorrected_classic, 0u);
  EXPECT_EQ(zero[0].uncorrected_combined, 0u);

  auto a = to_csv(run_experiment(p, {0.1, 0.01}, 500, 1, 7));
  auto b = to_csv(run_experiment(p, {0.01, 0.1}, 500, 1, 7));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), kExperimentCsvHeader);
  EXPECT_NE(a, to_csv(run_experiment(p, {0.1, 0.01}, 500, 1, 8)));
  auto rows = run_experiment(p, {0.1, 0.01}, 10, 1, 7);
  EXPECT_LT(rows[0].gamma, rows[1].gamma);
  EXPECT_THROW(run_experiment(p, {0.1}, 0, 1, 7), Error);
  EXPECT_THROW(run_experiment(p, {0.1}, 10, 4, 7), Error);
}

TEST(Experiment, CsvBoundsMatchAnalytic) {
  const auto& p = example3();
  auto rows = run_experiment(p, {0.02}, 10, 2, 1);
  auto b = analytic_bounds(p, 0.02, 2);
  EXPECT_EQ(format_g6(rows[0].bound_classic), format_g6(b.bound_classic));
  EXPECT_EQ(format_g6(rows[0].bound_combined), format_g6(b.bound_combined));
  EXPECT_EQ(format_g6(0.000123456789), "0.000123457");
}

TEST(BurstCapacity, CaseFormulas) {
  EXPECT_EQ(burst_capacity_for(1, 1), std::make_pair(1, 0));
  EXPECT_EQ(burst_capacity_for(4, 1), std::make_pair(2, 1));
  EXPECT_EQ(burst_capacity_for(2, 3), std::make_pair(2, 1));
  auto cap = burst_capacity(example3(), 1);
  EXPECT_EQ(cap.unrestricted, 1);
  EXPECT_EQ(cap.bounded, 1);
  EXPECT_EQ(cap.eta, 3);
  EXPECT_EQ(cap.within_eta, 1);
  EXPECT_EQ(cap.within_m_plus_eta, 0);
  try {
    burst_capacity(example2(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnequalDegrees);
  }
}

TEST(BurstExperiment, WidthUpToEtaRecovered) {
  auto recs = run_burst_experiment(example3(), 1, {1, 2, 3}, 20, 5);
  for (const auto& r : recs) {
    EXPECT_EQ(r.placements, 20 - r.width + 1);
    EXPECT_EQ(r.recovered, r.trials);
  }
  EXPECT_THROW(run_burst_experiment(example3(), 1, {21}, 1, 5), Error);
}

}  // namespace
}  // namespace polyrc
