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

#ifndef ADVSI_IO_H_
#define ADVSI_IO_H_

#include <string>

#include "advsi/analysis.h"
#include "advsi/attacker.h"
#include "advsi/defender.h"
#include "advsi/pmf.h"
#include "advsi/simulate.h"
#include "advsi/transport.h"
#include "json.hpp"

namespace advsi {

using Json = nlohmann::json;

// %.9g, with "inf", "-inf" and "nan" spelled out.
std::string FormatNumber(double x);
// A number rounded to nine significant digits, or the string "inf" / "-inf".
Json NumberJson(double x);
double NumberFromJson(const Json& j);

Json ToJson(const Pmf& p);
Pmf PmfFromJson(const Json& j);  // {"probs": [...]} or a bare array
Json ToJson(const EmpiricalType& t);
EmpiricalType EmpiricalTypeFromJson(const Json& j);
Json ToJson(const TransportMap& s);  // rows
TransportMap TransportMapFromJson(const Json& j);
Json ToJson(const CostMatrix& cost);  // {"cost": rows}
CostMatrix CostMatrixFromJson(const Json& j);

// Field names mirror GameConfig. Unknown keys throw std::domain_error.
Json ToJson(const GameConfig& cfg);
GameConfig GameConfigFromJson(const Json& j, GameConfig base = {});

Json ToJson(const DecisionOutcome& d);
DecisionOutcome DecisionOutcomeFromJson(const Json& j);
Json ToJson(const AttackResult& a);
AttackResult AttackResultFromJson(const Json& j);
Json ToJson(const SecurityMarginResult& r);
SecurityMarginResult SecurityMarginFromJson(const Json& j);
Json ToJson(const ExponentResult& r);
ExponentResult ExponentFromJson(const Json& j);
Json ToJson(const SimulationReport& r);
SimulationReport SimulationReportFromJson(const Json& j);
Json ToJson(const SanovPoint& p);
SanovPoint SanovPointFromJson(const Json& j);

// CSV columns n,trials,p_fp,p_fn,fp_exp,fn_exp,seed.
std::string SimulationCsvHeader();
std::string SimulationCsvRow(const SimulationReport& r);

// K lines of K comma-separated numbers.
CostMatrix CostMatrixFromCsv(const std::string& text);

// Command-line pmf: "bern(p)" for (1 - p, p), an inline list "0.2,0.8", or a
// path to a JSON file holding a pmf.
Pmf ParsePmfArg(const std::string& arg);
// Command-line type: inline counts "3,7" or a JSON file {"counts": [...]}.
EmpiricalType ParseTypeArg(const std::string& arg);
// Command-line cost: "abs" (|i - j|), "hamming", a CSV file or a JSON file
// {"cost": [[...], ...]}.
CostMatrix ParseCostArg(const std::string& arg, int alphabet_size);

std::string ReadFile(const std::string& path);

}  // namespace advsi

#endif  // ADVSI_IO_H_
