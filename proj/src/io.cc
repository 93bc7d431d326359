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

#include "advsi/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace advsi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Json PmfArray(const Pmf& p) {
  Json arr = Json::array();
  for (double v : p.values()) arr.push_back(NumberJson(v));
  return arr;
}

std::vector<double> NumberArray(const Json& j, const char* what) {
  if (!j.is_array()) {
    throw std::domain_error(std::string(what) + ": expected an array");
  }
  std::vector<double> out;
  for (const Json& v : j) out.push_back(NumberFromJson(v));
  return out;
}

const Json& Field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw std::domain_error(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

std::vector<double> SplitNumbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto begin = item.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(begin), &used);
    } catch (const std::exception&) {
      throw std::domain_error("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t\r", begin + used) != std::string::npos) {
      throw std::domain_error("not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

bool LooksInline(const std::string& arg) {
  return !arg.empty() && arg.find_first_not_of("0123456789.,eE+- ") ==
                             std::string::npos;
}

// "[a, b, c]" -> "a, b, c"; anything else is returned unchanged.
std::string StripBrackets(const std::string& arg) {
  if (arg.size() >= 2 && arg.front() == '[' && arg.back() == ']') {
    return arg.substr(1, arg.size() - 2);
  }
  return arg;
}

std::string ThresholdModeName(ThresholdMode m) {
  return m == ThresholdMode::kFiniteN ? "finite_n" : "asymptotic";
}

std::string AttackModeName(AttackMode m) {
  return m == AttackMode::kNonTargeted ? "nontargeted" : "targeted";
}

}  // namespace

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

Json NumberJson(double x) {
  if (!std::isfinite(x)) return FormatNumber(x);
  return std::stod(FormatNumber(x));
}

double NumberFromJson(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw std::domain_error("expected a number, got " + j.dump());
}

Json ToJson(const Pmf& p) { return {{"probs", PmfArray(p)}}; }

Pmf PmfFromJson(const Json& j) {
  if (j.is_array()) return Pmf(NumberArray(j, "probs"));
  return Pmf(NumberArray(Field(j, "probs"), "probs"));
}

Json ToJson(const EmpiricalType& t) {
  return {{"counts", t.counts()}, {"n", t.n()}};
}

EmpiricalType EmpiricalTypeFromJson(const Json& j) {
  const Json& counts = Field(j, "counts");
  if (!counts.is_array()) throw std::domain_error("counts: expected an array");
  std::vector<std::int64_t> c;
  for (const Json& v : counts) {
    if (!v.is_number_integer()) {
      throw std::domain_error("counts: entries must be integers");
    }
    c.push_back(v.get<std::int64_t>());
  }
  EmpiricalType t(std::move(c));
  if (j.contains("n") && j.at("n").get<std::int64_t>() != t.n()) {
    throw std::domain_error("n: does not match the sum of counts");
  }
  return t;
}

Json ToJson(const TransportMap& s) {
  Json rows = Json::array();
  for (int i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < s.size(); ++j) row.push_back(NumberJson(s(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

TransportMap TransportMapFromJson(const Json& j) {
  if (!j.is_array()) throw std::domain_error("transport: expected rows");
  std::vector<double> entries;
  for (const Json& row : j) {
    const std::vector<double> r = NumberArray(row, "transport");
    if (r.size() != j.size()) {
      throw std::domain_error("transport: expected a square matrix");
    }
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return TransportMap(static_cast<int>(j.size()), std::move(entries));
}

Json ToJson(const CostMatrix& cost) {
  Json rows = Json::array();
  for (int i = 0; i < cost.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < cost.size(); ++j) row.push_back(NumberJson(cost(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"cost", rows}};
}

Json ToJson(const GameConfig& cfg) {
  return {{"alpha", NumberJson(cfg.alpha)},
          {"lambda", NumberJson(cfg.lambda)},
          {"c", NumberJson(cfg.c)},
          {"L", NumberJson(cfg.L)},
          {"variant", VariantName(cfg.variant)},
          {"alphabet_size", cfg.alphabet_size},
          {"threshold_mode", ThresholdModeName(cfg.threshold_mode)},
          {"attack_mode", AttackModeName(cfg.attack_mode)}};
}

CostMatrix CostMatrixFromJson(const Json& j) {
  const Json& rows = Field(j, "cost");
  if (!rows.is_array()) throw std::domain_error("cost: expected rows");
  std::vector<double> entries;
  for (const Json& row : rows) {
    const std::vector<double> r = NumberArray(row, "cost");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return CostMatrix(static_cast<int>(rows.size()), std::move(entries));
}

GameConfig GameConfigFromJson(const Json& j, GameConfig base) {
  if (!j.is_object()) throw std::domain_error("config: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha") {
      base.alpha = NumberFromJson(value);
    } else if (key == "lambda") {
      base.lambda = NumberFromJson(value);
    } else if (key == "c") {
      base.c = NumberFromJson(value);
    } else if (key == "L") {
      base.L = NumberFromJson(value);
    } else if (key == "variant") {
      base.variant = ParseVariant(value.get<std::string>());
    } else if (key == "alphabet_size") {
      if (!value.is_number_integer()) {
        throw std::domain_error("alphabet_size: expected an integer");
      }
      base.alphabet_size = value.get<int>();
    } else if (key == "threshold_mode") {
      const std::string m = value.get<std::string>();
      if (m == "finite_n") {
        base.threshold_mode = ThresholdMode::kFiniteN;
      } else if (m == "asymptotic") {
        base.threshold_mode = ThresholdMode::kAsymptotic;
      } else {
        throw std::domain_error("threshold_mode: expected finite_n|asymptotic");
      }
    } else if (key == "attack_mode") {
      const std::string m = value.get<std::string>();
      if (m == "nontargeted") {
        base.attack_mode = AttackMode::kNonTargeted;
      } else if (m == "targeted") {
        base.attack_mode = AttackMode::kTargeted;
      } else {
        throw std::domain_error("attack_mode: expected nontargeted|targeted");
      }
    } else {
      throw std::domain_error("config: unknown field '" + key + "'");
    }
  }
  return base;
}

Json ToJson(const DecisionOutcome& d) {
  Json minimizer = Json::array();
  for (const Pmf& p : d.minimizer) minimizer.push_back(PmfArray(p));
  return {{"statistic", NumberJson(d.statistic)},
          {"threshold", NumberJson(d.threshold)},
          {"accept_h0", d.accept_h0},
          {"degenerate_threshold", d.degenerate_threshold},
          {"minimizer", minimizer}};
}

DecisionOutcome DecisionOutcomeFromJson(const Json& j) {
  DecisionOutcome d;
  d.statistic = NumberFromJson(Field(j, "statistic"));
  d.threshold = NumberFromJson(Field(j, "threshold"));
  d.accept_h0 = Field(j, "accept_h0").get<bool>();
  d.degenerate_threshold = Field(j, "degenerate_threshold").get<bool>();
  for (const Json& p : Field(j, "minimizer")) d.minimizer.push_back(PmfFromJson(p));
  return d;
}

Json ToJson(const AttackResult& a) {
  return {{"fake_training", PmfArray(a.fake_training)},
          {"corrupted_training", PmfArray(a.corrupted_training)},
          {"transport", ToJson(a.transport)},
          {"attacked_pmf", PmfArray(a.attacked_pmf)},
          {"achieved_statistic", NumberJson(a.achieved_statistic)}};
}

AttackResult AttackResultFromJson(const Json& j) {
  return {PmfFromJson(Field(j, "fake_training")),
          PmfFromJson(Field(j, "corrupted_training")),
          TransportMapFromJson(Field(j, "transport")),
          PmfFromJson(Field(j, "attacked_pmf")),
          NumberFromJson(Field(j, "achieved_statistic"))};
}

Json ToJson(const SecurityMarginResult& r) {
  return {{"margin", NumberJson(r.margin)},
          {"alpha_blinding", NumberJson(r.alpha_blinding)},
          {"at_blinding", r.at_blinding},
          {"witness", PmfArray(r.witness_v)}};
}

SecurityMarginResult SecurityMarginFromJson(const Json& j) {
  return {NumberFromJson(Field(j, "margin")),
          NumberFromJson(Field(j, "alpha_blinding")),
          Field(j, "at_blinding").get<bool>(), PmfFromJson(Field(j, "witness"))};
}

Json ToJson(const ExponentResult& r) {
  return {{"exponent", NumberJson(r.exponent)},
          {"minimizer_R", PmfArray(r.minimizer_r)},
          {"minimizer_P", PmfArray(r.minimizer_p)}};
}

ExponentResult ExponentFromJson(const Json& j) {
  return {NumberFromJson(Field(j, "exponent")),
          PmfFromJson(Field(j, "minimizer_R")),
          PmfFromJson(Field(j, "minimizer_P"))};
}

Json ToJson(const SimulationReport& r) {
  return {{"n", r.n},
          {"trials", r.trials},
          {"fp_count", r.fp_count},
          {"fn_count", r.fn_count},
          {"p_fp", NumberJson(r.p_fp_hat)},
          {"p_fn", NumberJson(r.p_fn_hat)},
          {"fp_exp", NumberJson(r.fp_exponent_hat)},
          {"fn_exp", NumberJson(r.fn_exponent_hat)},
          {"seed", r.seed},
          {"config", ToJson(r.config_echo)},
          {"fake_samples_rounded_to_zero", r.fake_samples_rounded_to_zero},
          {"degenerate_threshold", r.degenerate_threshold}};
}

SimulationReport SimulationReportFromJson(const Json& j) {
  SimulationReport r;
  r.n = Field(j, "n").get<std::int64_t>();
  r.trials = Field(j, "trials").get<std::int64_t>();
  r.fp_count = Field(j, "fp_count").get<std::int64_t>();
  r.fn_count = Field(j, "fn_count").get<std::int64_t>();
  r.p_fp_hat = NumberFromJson(Field(j, "p_fp"));
  r.p_fn_hat = NumberFromJson(Field(j, "p_fn"));
  r.fp_exponent_hat = NumberFromJson(Field(j, "fp_exp"));
  r.fn_exponent_hat = NumberFromJson(Field(j, "fn_exp"));
  r.seed = Field(j, "seed").get<std::uint64_t>();
  r.config_echo = GameConfigFromJson(Field(j, "config"));
  r.fake_samples_rounded_to_zero =
      Field(j, "fake_samples_rounded_to_zero").get<bool>();
  r.degenerate_threshold = Field(j, "degenerate_threshold").get<bool>();
  return r;
}

Json ToJson(const SanovPoint& p) {
  return {{"n", p.n},
          {"hits", p.hits},
          {"empirical_exponent", NumberJson(p.empirical_exponent)},
          {"divergence_bound", NumberJson(p.divergence_bound)},
          {"censored", p.censored}};
}

SanovPoint SanovPointFromJson(const Json& j) {
  return {Field(j, "n").get<std::int64_t>(), Field(j, "hits").get<std::int64_t>(),
          NumberFromJson(Field(j, "empirical_exponent")),
          NumberFromJson(Field(j, "divergence_bound")),
          Field(j, "censored").get<bool>()};
}

std::string SimulationCsvHeader() {
  return "n,trials,p_fp,p_fn,fp_exp,fn_exp,seed";
}

std::string SimulationCsvRow(const SimulationReport& r) {
  return std::to_string(r.n) + "," + std::to_string(r.trials) + "," +
         FormatNumber(r.p_fp_hat) + "," + FormatNumber(r.p_fn_hat) + "," +
         FormatNumber(r.fp_exponent_hat) + "," +
         FormatNumber(r.fn_exponent_hat) + "," + std::to_string(r.seed);
}

CostMatrix CostMatrixFromCsv(const std::string& text) {
  std::vector<double> entries;
  std::stringstream ss(text);
  std::string line;
  int rows = 0;
  while (std::getline(ss, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<double> row = SplitNumbers(line, ',');
    entries.insert(entries.end(), row.begin(), row.end());
    ++rows;
  }
  if (entries.size() != static_cast<std::size_t>(rows) * rows) {
    throw std::domain_error("cost: CSV must hold K rows of K numbers");
  }
  return CostMatrix(rows, std::move(entries));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Pmf ParsePmfArg(const std::string& arg) {
  if (arg.rfind("bern(", 0) == 0 && arg.back() == ')') {
    const std::vector<double> p =
        SplitNumbers(arg.substr(5, arg.size() - 6), ',');
    if (p.size() != 1) throw std::domain_error("bern(p): expected one number");
    return Pmf::Bernoulli(p[0]);
  }
  if (const std::string list = StripBrackets(arg); LooksInline(list)) {
    return Pmf(SplitNumbers(list, ','));
  }
  try {
    return PmfFromJson(Json::parse(ReadFile(arg)));
  } catch (const Json::exception& e) {
    throw std::domain_error("'" + arg + "': " + e.what());
  }
}

EmpiricalType ParseTypeArg(const std::string& arg) {
  if (const std::string list = StripBrackets(arg); LooksInline(list)) {
    std::vector<std::int64_t> counts;
    for (double v : SplitNumbers(list, ',')) {
      if (v != std::floor(v)) {
        throw std::domain_error("type: counts must be integers");
      }
      counts.push_back(static_cast<std::int64_t>(v));
    }
    return EmpiricalType(std::move(counts));
  }
  try {
    return EmpiricalTypeFromJson(Json::parse(ReadFile(arg)));
  } catch (const Json::exception& e) {
    throw std::domain_error("'" + arg + "': " + e.what());
  }
}

CostMatrix ParseCostArg(const std::string& arg, int alphabet_size) {
  if (arg.empty() || arg == "abs") {
    return CostMatrix::AbsoluteDifference(alphabet_size);
  }
  if (arg == "hamming") return CostMatrix::Hamming(alphabet_size);
  const std::string text = ReadFile(arg);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return CostMatrixFromJson(Json::parse(text));
    } catch (const Json::exception& e) {
      throw std::domain_error("'" + arg + "': " + e.what());
    }
  }
  return CostMatrixFromCsv(text);
}

}  // namespace advsi
