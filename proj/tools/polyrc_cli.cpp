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

// polyrc_cli: analyze, encode, decode, simulate, bursts and bounds for
// polynomial remainder codes described by a JSON code spec.
//
// Exit codes: 0 ok, 1 decode failed, 2 parse error, 3 invalid moduli,
// 4 contract violation, 5 unwritable output.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyrc/polyrc.hpp"
#include "polyrc/spec_file.hpp"

namespace {

using namespace polyrc;

enum Exit : int { kOk = 0, kDecodeFailed = 1, kParse = 2, kInvalidModuli = 3, kContract = 4, kUnwritable = 5 };

struct UnwritableOutput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidResidue:
      return kParse;
    case ErrorCode::kInvalidField:
    case ErrorCode::kInvalidModuli:
    case ErrorCode::kUnequalDegrees:
    case ErrorCode::kFieldMismatch:
      return kInvalidModuli;
    default:
      return kContract;
  }
}

struct Options {
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "text";

  std::string message;
  std::string residues;
  std::string decoder = "classic";
  std::optional<int> lambda;
  std::optional<int> theta;
  std::vector<double> gammas;
  std::uint64_t trials = 1000;
  std::uint64_t contents = 200;
  std::vector<std::size_t> widths;
};

std::string join(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

struct Loaded {
  CodeSpecFile spec;
  CodeProfile profile;
};

Loaded load(const Options& opt) {
  if (opt.spec.empty()) throw Error(ErrorCode::kParseError, "--spec is required");
  auto spec = load_code_spec(opt.spec);
  auto profile = build_profile(to_moduli_set(spec));
  return {std::move(spec), std::move(profile)};
}

int theta_of(const Options& opt, const Loaded& in) { return opt.theta.value_or(in.spec.theta.value_or(1)); }

std::uint64_t require_seed(const Options& opt) {
  if (!opt.seed) throw Error(ErrorCode::kParseError, "--seed is required for randomized commands");
  return *opt.seed;
}

/// Writes to --out when given, stdout otherwise.
void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw UnwritableOutput("cannot open " + opt.out + " for writing");
  file << text;
  file.flush();
  if (!file) throw UnwritableOutput("write to " + opt.out + " failed");
}

int cmd_analyze(const Options& opt) {
  auto in = load(opt);
  const auto& p = in.profile;
  const auto b = compute_bounds(p);
  std::vector<std::pair<std::string, std::string>> rows{
      {"p", std::to_string(p.field().modulus())},
      {"L", std::to_string(p.size())},
      {"deg_M", std::to_string(p.lcm().deg_or_minus_one())},
      {"d", std::to_string(p.code_distance())},
      {"A", std::to_string(p.correctable())},
      {"tau", join(p.tau_per_index)},
      {"w", join(p.derived_distance)},
      {"tau_per_reference", join(b.tau_per_reference)},
      {"tau_bound", std::to_string(b.tau_bound)},
      {"best_reference", std::to_string(b.best_reference)},
      {"lambda_bound", std::to_string(b.lambda_bound)},
  };
  for (const auto& c : b.capacities) {
    const std::string t = std::to_string(c.theta);
    rows.emplace_back("eta_bound[theta=" + t + "]", std::to_string(b.eta_bound(c.theta)));
    rows.emplace_back("B[theta=" + t + "]", std::to_string(c.bounded));
  }
  std::vector<int> degenerate;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.degenerate_reference[i]) degenerate.push_back(static_cast<int>(i));
  }
  rows.emplace_back("degenerate_references", join(degenerate));

  std::ostringstream os;
  if (opt.format == "csv") {
    os << "key,value\n";
    for (const auto& [k, v] : rows) os << k << ",\"" << v << "\"\n";
  } else {
    for (const auto& [k, v] : rows) os << k << '=' << v << '\n';
    os << "tau_matrix:\n";
    for (const auto& row : p.tau_matrix) {
      os << ' ';
      for (auto v : row) os << ' ' << (v < 0 ? std::string("-") : std::to_string(v));
      os << '\n';
    }
    os << "mu:\n";
    const auto mu = p.mu();
    for (std::size_t i = 0; i < mu.size(); ++i) os << "  " << i << ": " << to_string(mu[i]) << '\n';
  }
  emit(opt, os.str());
  return kOk;
}

int cmd_encode(const Options& opt) {
  auto in = load(opt);
  auto a = parse_polynomial(in.profile.field(), opt.message);
  emit(opt, to_string(encode(in.profile, a)) + "\n");
  return kOk;
}

int cmd_decode(const Options& opt) {
  auto in = load(opt);
  const auto& p = in.profile;
  auto rv = parse_residue_vector(p.field(), opt.residues);
  DecodeOutcome out;
  if (opt.decoder == "classic") {
    out = classic_decode(p, rv);
  } else if (opt.decoder == "robust") {
    out = robust_decode(p, rv);
  } else if (opt.decoder == "mixed") {
    const int bound = compute_bounds(p).lambda_bound;
    out = mixed_decode(p, rv, opt.lambda.value_or(bound - 1));
  } else {
    out = combined_decode(p, rv, theta_of(opt, in));
  }
  std::ostringstream os;
  os << "status=" << to_string(out.status) << '\n';
  if (out.reconstruction) {
    os << "reconstruction=" << to_string(*out.reconstruction) << '\n';
    if (auto g = generator_of(in.spec); g && out.status == DecodeStatus::kRobust) {
      os << "refined=" << to_string(product_refine(*out.reconstruction, *g)) << '\n';
    }
  }
  if (out.reference_index) os << "reference=" << *out.reference_index << '\n';
  if (out.failure_reason) os << "failure=" << to_string(*out.failure_reason) << '\n';
  os << "failed_checks=" << join(out.failed_checks) << '\n';
  emit(opt, os.str());
  return out.ok() ? kOk : kDecodeFailed;
}

int cmd_simulate(const Options& opt) {
  auto in = load(opt);
  const auto seed = require_seed(opt);
  const int theta = theta_of(opt, in);
  auto records = run_experiment(in.profile, opt.gammas, opt.trials, theta, seed);
  const auto csv = to_csv(records);
  if (opt.format == "csv" || !opt.out.empty()) emit(opt, csv);
  if (opt.format == "text") {
    std::printf("%-10s %-8s %-12s %-12s %-12s %-12s\n", "gamma", "trials", "rate_classic", "rate_combined",
                "bound_classic", "bound_combined");
    for (const auto& r : records) {
      const double n = static_cast<double>(r.trials);
      std::printf("%-10s %-8llu %-12s %-12s %-12s %-12s\n", format_g6(r.gamma).c_str(),
                  static_cast<unsigned long long>(r.trials),
                  format_g6(static_cast<double>(r.uncorrected_classic) / n).c_str(),
                  format_g6(static_cast<double>(r.uncorrected_combined) / n).c_str(),
                  format_g6(r.bound_classic).c_str(), format_g6(r.bound_combined).c_str());
    }
  }
  return kOk;
}

int cmd_bursts(const Options& opt) {
  auto in = load(opt);
  const auto seed = require_seed(opt);
  const int theta = theta_of(opt, in);
  const auto cap = burst_capacity(in.profile, theta);
  auto widths = opt.widths;
  if (widths.empty()) {
    for (int w = 1; w <= cap.eta; ++w) widths.push_back(static_cast<std::size_t>(w));
  }
  const auto total = FrameLayout::of(in.profile).total;
  for (auto w : widths) {
    if (w < 1 || w > total) {
      throw Error(ErrorCode::kContractViolation,
                  "burst width " + std::to_string(w) + " outside [1, " + std::to_string(total) + "]");
    }
  }
  auto records = run_burst_experiment(in.profile, theta, widths, opt.contents, seed);
  std::ostringstream os;
  if (opt.format == "csv") {
    os << "width,placements,trials,recovered\n";
    for (const auto& r : records) os << r.width << ',' << r.placements << ',' << r.trials << ',' << r.recovered << '\n';
  } else {
    os << "A=" << cap.unrestricted << " B=" << cap.bounded << " eta=" << cap.eta << " m=" << cap.segment << '\n';
    os << "capacity width<=" << cap.eta << ": " << cap.within_eta << '\n';
    os << "capacity width<=" << cap.segment + cap.eta << ": " << cap.within_m_plus_eta << '\n';
    for (const auto& r : records) {
      os << "width=" << r.width << " placements=" << r.placements << " trials=" << r.trials
         << " recovered=" << r.recovered << " rate="
         << format_g6(static_cast<double>(r.recovered) / static_cast<double>(r.trials)) << '\n';
    }
  }
  emit(opt, os.str());
  return kOk;
}

int cmd_bounds(const Options& opt) {
  auto in = load(opt);
  const int theta = theta_of(opt, in);
  compute_bounds(in.profile).eta_bound(theta);
  std::ostringstream os;
  os << "gamma,eta,p_c,p_c_prime,bound_classic,p_bar_c,p_bar_c_prime,bound_combined,theta\n";
  for (double g : opt.gammas) {
    auto b = analytic_bounds(in.profile, g, theta);
    os << format_g6(g) << ',' << b.eta << ',' << format_g6(b.p_c) << ',' << format_g6(b.p_c_prime) << ','
       << format_g6(b.bound_classic) << ',' << format_g6(b.p_bar_c) << ',' << format_g6(b.p_bar_c_prime) << ','
       << format_g6(b.bound_combined) << ',' << theta << '\n';
  }
  emit(opt, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial remainder codes over GF(p)"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--spec", opt.spec, "Code spec JSON file");
  app.add_option("--seed", opt.seed, "RNG seed (required by simulate and bursts)");
  app.add_option("--out", opt.out, "Output file");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  app.fallthrough();

  auto* analyze = app.add_subcommand("analyze", "Report code distance, degree tables and bounds");
  auto* encode_cmd = app.add_subcommand("encode", "Encode a message polynomial");
  encode_cmd->add_option("--message", opt.message, "Message, low-order-first coefficients")->required();
  auto* decode_cmd = app.add_subcommand("decode", "Decode a residue vector");
  decode_cmd->add_option("--residues", opt.residues, "Residues r0;r1;... with * for erasures")->required();
  decode_cmd->add_option("--decoder", opt.decoder, "Decoder")
      ->check(CLI::IsMember({"classic", "robust", "mixed", "combined"}));
  decode_cmd->add_option("--lambda", opt.lambda, "Error degree bound for mixed decoding");
  decode_cmd->add_option("--theta", opt.theta, "Theta for combined decoding");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep over symbol error rates");
  simulate->add_option("--gammas", opt.gammas, "Symbol error probabilities")->delimiter(',')->required();
  simulate->add_option("--trials", opt.trials, "Trials per gamma");
  simulate->add_option("--theta", opt.theta, "Theta for combined decoding");
  auto* bursts = app.add_subcommand("bursts", "Burst capacity table and exhaustive placement experiment");
  bursts->add_option("--theta", opt.theta, "Theta for combined decoding");
  bursts->add_option("--widths", opt.widths, "Burst widths (default 1..eta)")->delimiter(',');
  bursts->add_option("--trials", opt.contents, "Random contents per placement");
  auto* bounds = app.add_subcommand("bounds", "Analytic uncorrected-error bounds");
  bounds->add_option("--gammas", opt.gammas, "Symbol error probabilities")->delimiter(',')->required();
  bounds->add_option("--theta", opt.theta, "Theta for combined decoding");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*analyze) return cmd_analyze(opt);
    if (*encode_cmd) return cmd_encode(opt);
    if (*decode_cmd) return cmd_decode(opt);
    if (*simulate) return cmd_simulate(opt);
    if (*bursts) return cmd_bursts(opt);
    if (*bounds) return cmd_bounds(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const UnwritableOutput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUnwritable;
  }
  return kParse;
}
