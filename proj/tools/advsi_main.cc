// Copyright 2026 The advsi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line frontend for the advsi library.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "advsi/analysis.h"
#include "advsi/attacker.h"
#include "advsi/defender.h"
#include "advsi/io.h"
#include "advsi/pmf.h"
#include "advsi/simulate.h"
#include "advsi/transport.h"

namespace {

using advsi::FormatNumber;
using advsi::Json;

constexpr int kUsageError = 2;

struct Flags {
  std::string px;
  std::string py;
  std::string p;
  std::string ptau;
  std::string pt;
  std::string v;
  std::string t;
  std::string cost;
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::optional<double> c;
  std::optional<double> L;
  std::optional<std::string> variant;
  std::optional<std::string> threshold_mode;
  std::optional<std::string> attack_mode;
  std::string mode = "targeted";
  std::int64_t n = 400;
  std::string ns = "100,200,400,800";
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string format = "json";
  std::string out;
  std::string config;
  std::string alphas = "0:0.35:0.01";
  int index = 1;
  double threshold = 0.5;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::domain_error("out: cannot open '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

advsi::Pmf RequirePmf(const std::string& value, const char* name) {
  if (value.empty()) {
    throw std::domain_error(std::string("--") + name + ": required");
  }
  try {
    return advsi::ParsePmfArg(value);
  } catch (const std::domain_error& e) {
    throw std::domain_error(std::string("--") + name + ": " + e.what());
  }
}

void CheckAlphabet(const advsi::Pmf& p, int k, const char* name) {
  if (p.size() != k) {
    throw std::domain_error(std::string("--") + name + ": alphabet size " +
                            std::to_string(p.size()) + " differs from " +
                            std::to_string(k));
  }
}

advsi::GameConfig BuildConfig(const Flags& f, int alphabet_size) {
  advsi::GameConfig cfg;
  cfg.alphabet_size = alphabet_size;
  if (!f.config.empty()) {
    try {
      cfg = advsi::GameConfigFromJson(Json::parse(advsi::ReadFile(f.config)),
                                      cfg);
    } catch (const Json::exception& e) {
      throw std::domain_error("--config: " + std::string(e.what()));
    }
  }
  // Flags override the file.
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.lambda) cfg.lambda = *f.lambda;
  if (f.c) cfg.c = *f.c;
  if (f.L) cfg.L = *f.L;
  Json overrides = Json::object();
  if (f.variant) overrides["variant"] = *f.variant;
  if (f.threshold_mode) overrides["threshold_mode"] = *f.threshold_mode;
  if (f.attack_mode) overrides["attack_mode"] = *f.attack_mode;
  cfg = advsi::GameConfigFromJson(overrides, cfg);
  if (cfg.alphabet_size != alphabet_size) {
    throw std::domain_error("alphabet_size: config says " +
                            std::to_string(cfg.alphabet_size) +
                            " but the inputs have " +
                            std::to_string(alphabet_size));
  }
  cfg.Validate();
  return cfg;
}

advsi::CostMatrix BuildCost(const Flags& f, int k) {
  advsi::CostMatrix cost = advsi::ParseCostArg(f.cost, k);
  if (cost.size() != k) {
    throw std::domain_error("--cost: alphabet size " +
                            std::to_string(cost.size()) + " differs from " +
                            std::to_string(k));
  }
  return cost;
}

std::vector<std::int64_t> ParseList(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw std::domain_error("--ns: not an integer: '" + item + "'");
    }
  }
  if (out.empty()) throw std::domain_error("--ns: empty list");
  return out;
}

std::vector<double> ParseRange(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::domain_error("--alphas: expected start:stop:step");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw std::domain_error("--alphas: expected start:stop:step with step > 0");
  }
  std::vector<double> out;
  const auto count =
      static_cast<std::int64_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (std::int64_t i = 0; i <= count; ++i) out.push_back(parts[0] + i * parts[2]);
  return out;
}

// Writes one JSON object, or a CSV header plus one row of its scalar fields.
void Emit(const Flags& f, const Json& j) {
  Output out(f.out);
  if (f.format == "json") {
    out.stream() << j.dump() << "\n";
    return;
  }
  std::string header;
  std::string row;
  for (const auto& [key, value] : j.items()) {
    if (value.is_structured()) continue;
    header += (header.empty() ? "" : ",") + key;
    std::string cell;
    if (value.is_number()) {
      cell = FormatNumber(value.get<double>());
    } else if (value.is_string()) {
      cell = value.get<std::string>();
    } else {
      cell = value.dump();
    }
    row += (row.empty() ? "" : ",") + cell;
  }
  out.stream() << header << "\n" << row << "\n";
}

int RunDecide(const Flags& f) {
  if (f.v.empty() || f.t.empty()) {
    throw std::domain_error("--v and --t: required (type counts)");
  }
  const advsi::EmpiricalType v = advsi::ParseTypeArg(f.v);
  const advsi::EmpiricalType t = advsi::ParseTypeArg(f.t);
  if (v.size() != t.size()) {
    throw std::domain_error("--t: alphabet size differs from --v");
  }
  const advsi::GameConfig cfg = BuildConfig(f, v.size());
  Emit(f, advsi::ToJson(advsi::Decide(v, t, cfg)));
  return 0;
}

int RunAttack(const Flags& f) {
  const advsi::Pmf py = RequirePmf(f.py, "py");
  const int k = py.size();
  const advsi::GameConfig cfg = BuildConfig(f, k);
  const advsi::CostMatrix cost = BuildCost(f, k);
  if (f.mode == "test") {
    const advsi::Pmf pt = RequirePmf(f.pt, "pt");
    CheckAlphabet(pt, k, "pt");
    Emit(f, advsi::ToJson(advsi::AttackTest(py, pt, cfg, cost)));
    return 0;
  }
  const advsi::Pmf ptau = RequirePmf(f.ptau, "ptau");
  CheckAlphabet(ptau, k, "ptau");
  if (f.mode == "targeted") {
    Emit(f, advsi::ToJson(advsi::AttackTargeted(ptau, py, cfg, cost)));
  } else if (f.mode == "nontargeted") {
    const advsi::Pmf model = f.p.empty() ? py : RequirePmf(f.p, "p");
    CheckAlphabet(model, k, "p");
    advsi::NonTargetedAttacker attacker(model, cfg, cost);
    Emit(f, advsi::ToJson(attacker.Attack(ptau, py)));
  } else {
    throw std::domain_error("--mode: expected test|targeted|nontargeted");
  }
  return 0;
}

int RunMargin(const Flags& f) {
  const advsi::Pmf px = RequirePmf(f.px, "px");
  const advsi::Pmf py = RequirePmf(f.py, "py");
  CheckAlphabet(py, px.size(), "py");
  const advsi::GameConfig cfg = BuildConfig(f, px.size());
  const advsi::CostMatrix cost = BuildCost(f, px.size());
  Emit(f, advsi::ToJson(
              advsi::SecurityMargin(px, py, cfg.alpha, cost, cfg.variant)));
  return 0;
}

int RunMarginCurve(const Flags& f) {
  const advsi::Pmf px = RequirePmf(f.px, "px");
  const advsi::Pmf py = RequirePmf(f.py, "py");
  CheckAlphabet(py, px.size(), "py");
  const advsi::GameConfig cfg = BuildConfig(f, px.size());
  const advsi::CostMatrix cost = BuildCost(f, px.size());
  Output out(f.out);
  if (f.format == "csv") out.stream() << "alpha,margin,alpha_blinding\n";
  for (double alpha : ParseRange(f.alphas)) {
    const advsi::SecurityMarginResult r =
        advsi::SecurityMargin(px, py, alpha, cost, cfg.variant);
    if (f.format == "csv") {
      out.stream() << FormatNumber(alpha) << "," << FormatNumber(r.margin)
                   << "," << FormatNumber(r.alpha_blinding) << "\n";
    } else {
      Json j = advsi::ToJson(r);
      j["alpha"] = advsi::NumberJson(alpha);
      out.stream() << j.dump() << "\n";
    }
  }
  return 0;
}

int RunBlinding(const Flags& f) {
  const advsi::Pmf px = RequirePmf(f.px, "px");
  const advsi::Pmf py = RequirePmf(f.py, "py");
  CheckAlphabet(py, px.size(), "py");
  const advsi::GameConfig cfg = BuildConfig(f, px.size());
  Emit(f, Json{{"alpha_blinding", advsi::NumberJson(advsi::BlindingLevel(
                                      px, py, cfg.variant))}});
  return 0;
}

int RunRegion(const Flags& f) {
  const advsi::Pmf px = RequirePmf(f.px, "px");
  const advsi::Pmf p = RequirePmf(f.p, "p");
  CheckAlphabet(p, px.size(), "p");
  const advsi::GameConfig cfg = BuildConfig(f, px.size());
  const advsi::CostMatrix cost = BuildCost(f, px.size());
  const advsi::ClosestWithinBudget best =
      advsi::MinL1WithinEmd(p, px, cfg.L, cost);
  Emit(f, Json{{"member", advsi::IndistMembership(p, px, cfg, cost)},
               {"member_at_lambda", advsi::GammaMembership(p, px, cfg, cost)},
               {"min_l1", advsi::NumberJson(best.l1)},
               {"radius", advsi::NumberJson(cfg.ReachRadius())},
               {"cost_is_metric", cost.IsMetric()}});
  return 0;
}

int RunExponent(const Flags& f) {
  const advsi::Pmf px = RequirePmf(f.px, "px");
  const advsi::Pmf py = RequirePmf(f.py, "py");
  CheckAlphabet(py, px.size(), "py");
  const advsi::GameConfig cfg = BuildConfig(f, px.size());
  const advsi::CostMatrix cost = BuildCost(f, px.size());
  Emit(f, advsi::ToJson(advsi::ErrorExponent(px, py, cfg, cost)));
  return 0;
}

int RunSimulate(const Flags& f, bool sweep) {
  const advsi::Pmf px = RequirePmf(f.px, "px");
  const advsi::Pmf py = RequirePmf(f.py, "py");
  CheckAlphabet(py, px.size(), "py");
  const advsi::GameConfig cfg = BuildConfig(f, px.size());
  const advsi::CostMatrix cost = BuildCost(f, px.size());
  advsi::SimulationOptions options;
  options.threads = f.threads;
  Output out(f.out);
  if (!sweep) {
    const advsi::SimulationReport r = advsi::RunGameTrials(
        px, py, cfg, cost, f.n, f.trials, f.seed, options);
    if (f.format == "csv") {
      out.stream() << advsi::SimulationCsvHeader() << "\n"
                   << advsi::SimulationCsvRow(r) << "\n";
    } else {
      out.stream() << advsi::ToJson(r).dump() << "\n";
    }
    return 0;
  }
  const double asymptotic = advsi::ErrorExponent(px, py, cfg, cost).exponent;
  const std::vector<advsi::SimulationReport> reports = advsi::ExponentSweep(
      px, py, cfg, cost, ParseList(f.ns), f.trials, f.seed, options);
  if (f.format == "csv") {
    out.stream() << "n,trials,p_fp,p_fn,fp_exp,fn_exp,fn_exp_asymptotic,seed\n";
    for (const advsi::SimulationReport& r : reports) {
      out.stream() << r.n << "," << r.trials << "," << FormatNumber(r.p_fp_hat)
                   << "," << FormatNumber(r.p_fn_hat) << ","
                   << FormatNumber(r.fp_exponent_hat) << ","
                   << FormatNumber(r.fn_exponent_hat) << ","
                   << FormatNumber(asymptotic) << "," << r.seed << "\n";
    }
  } else {
    for (const advsi::SimulationReport& r : reports) {
      Json j = advsi::ToJson(r);
      j["fn_exp_asymptotic"] = advsi::NumberJson(asymptotic);
      out.stream() << j.dump() << "\n";
    }
  }
  return 0;
}

int RunSanov(const Flags& f) {
  const advsi::Pmf p = RequirePmf(f.p, "p");
  if (f.index < 0 || f.index >= p.size()) {
    throw std::domain_error("--index: outside the alphabet");
  }
  const int index = f.index;
  const double threshold = f.threshold;
  const advsi::PmfPredicate in_set = [index, threshold](const advsi::Pmf& q) {
    return q[index] >= threshold;
  };
  advsi::SimulationOptions options;
  options.threads = f.threads;
  const std::vector<advsi::SanovPoint> points =
      advsi::SanovProbe(p, in_set, ParseList(f.ns), f.trials, f.seed, options);
  Output out(f.out);
  if (f.format == "csv") {
    out.stream() << "n,trials,hits,empirical_exponent,divergence_bound,censored\n";
  }
  for (const advsi::SanovPoint& s : points) {
    if (f.format == "csv") {
      out.stream() << s.n << "," << f.trials << "," << s.hits << ","
                   << FormatNumber(s.empirical_exponent) << ","
                   << FormatNumber(s.divergence_bound) << ","
                   << (s.censored ? "true" : "false") << "\n";
    } else {
      Json row = advsi::ToJson(s);
      row["trials"] = f.trials;
      out.stream() << row.dump() << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source identification with corrupted training: strategies, "
               "margins, exponents and simulation."};
  app.require_subcommand(1);
  Flags f;

  auto add_game = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", f.alpha, "fraction of corrupted training samples");
    cmd->add_option("--lambda", f.lambda, "false positive exponent (bits)");
    cmd->add_option("--c", f.c, "training length over test length");
    cmd->add_option("--L", f.L, "per-letter distortion budget");
    cmd->add_option("--variant", f.variant, "addition|replacement");
    cmd->add_option("--threshold-mode", f.threshold_mode, "finite_n|asymptotic");
    cmd->add_option("--attack-mode", f.attack_mode, "nontargeted|targeted");
    cmd->add_option("--config", f.config, "GameConfig JSON file");
    cmd->add_option("--format", f.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", f.out, "output file (default stdout)");
  };
  auto add_cost = [&](CLI::App* cmd) {
    cmd->add_option("--cost", f.cost,
                    "abs|hamming|CSV file|JSON file (default abs: |i - j|)");
  };
  auto add_pair = [&](CLI::App* cmd) {
    cmd->add_option("--px", f.px, "pmf of X: bern(p) = (1-p, p), list or JSON");
    cmd->add_option("--py", f.py, "pmf of Y: bern(p) = (1-p, p), list or JSON");
  };
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--trials", f.trials, "Monte Carlo trials");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  };

  CLI::App* decide = app.add_subcommand("decide", "defender decision on types");
  decide->add_option("--v", f.v, "test type counts, e.g. 3,7");
  decide->add_option("--t", f.t, "training type counts");
  add_game(decide);

  CLI::App* attack = app.add_subcommand("attack", "optimal attack");
  attack->add_option("--py", f.py, "test pmf under H1");
  attack->add_option("--ptau", f.ptau, "clean training pmf");
  attack->add_option("--pt", f.pt, "training pmf (--mode test)");
  attack->add_option("--p", f.p, "model of P_Y (--mode nontargeted)");
  attack->add_option("--mode", f.mode, "test|targeted|nontargeted");
  add_game(attack);
  add_cost(attack);

  CLI::App* margin = app.add_subcommand("margin", "security margin");
  add_pair(margin);
  add_game(margin);
  add_cost(margin);

  CLI::App* curve =
      app.add_subcommand("margin-curve", "security margin versus alpha");
  add_pair(curve);
  curve->add_option("--alphas", f.alphas, "start:stop:step");
  add_game(curve);
  add_cost(curve);

  CLI::App* blinding = app.add_subcommand("blinding", "blinding corruption level");
  add_pair(blinding);
  add_game(blinding);

  CLI::App* region =
      app.add_subcommand("region", "indistinguishability region membership");
  region->add_option("--px", f.px, "pmf of X");
  region->add_option("--p", f.p, "probe pmf");
  add_game(region);
  add_cost(region);

  CLI::App* exponent = app.add_subcommand("exponent", "false negative exponent");
  add_pair(exponent);
  add_game(exponent);
  add_cost(exponent);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo game trials");
  add_pair(simulate);
  simulate->add_option("--n", f.n, "test sequence length");
  add_sim(simulate);
  add_game(simulate);
  add_cost(simulate);

  CLI::App* sweep = app.add_subcommand("sweep", "trials over several n");
  add_pair(sweep);
  sweep->add_option("--ns", f.ns, "comma-separated ascending n values");
  add_sim(sweep);
  add_game(sweep);
  add_cost(sweep);

  CLI::App* sanov = app.add_subcommand(
      "sanov", "probability that a type lands in {Q : Q(index) >= threshold}");
  sanov->add_option("--p", f.p, "source pmf");
  sanov->add_option("--ns", f.ns, "comma-separated n values");
  sanov->add_option("--index", f.index, "symbol index of the half-space");
  sanov->add_option("--threshold", f.threshold, "half-space threshold");
  add_sim(sanov);
  sanov->add_option("--format", f.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sanov->add_option("--out", f.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    if (*decide) return RunDecide(f);
    if (*attack) return RunAttack(f);
    if (*margin) return RunMargin(f);
    if (*curve) return RunMarginCurve(f);
    if (*blinding) return RunBlinding(f);
    if (*region) return RunRegion(f);
    if (*exponent) return RunExponent(f);
    if (*simulate) return RunSimulate(f, false);
    if (*sweep) return RunSimulate(f, true);
    if (*sanov) return RunSanov(f);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsageError;
}
