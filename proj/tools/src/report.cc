// Copyright 2026 The Proplab Authors.
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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "proplab/harness/scenario.h"

namespace proplab::harness {
namespace {

constexpr const char* kColumns[] = {
    "instance_id", "mechanism", "eq_kind", "eps",   "eps_ci",
    "sw_eq",       "ew_eq",     "sw_opt",  "ew_opt", "ratio",
    "bound",       "pass",      "seed",    "wallclock_ms"};

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double ParseNumber(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: " + s);
  return x;
}

Json JsonNumber(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double JsonToNumber(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) return ParseNumber(j.get<std::string>());
  return j.get<double>();
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        field += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

double Field(const RunReport& r, const std::string& name) {
  if (name == "eps") return r.eps;
  if (name == "eps_ci") return r.eps_ci;
  if (name == "sw_eq") return r.sw_eq;
  if (name == "ew_eq") return r.ew_eq;
  if (name == "sw_opt") return r.sw_opt;
  if (name == "ew_opt") return r.ew_opt;
  if (name == "ratio") return r.ratio;
  throw std::invalid_argument("bound refers to an unknown field: " + name);
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(' ');
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(' ') - b + 1);
}

bool Clause(const RunReport& r, const std::string& clause) {
  std::size_t at = clause.find("<=");
  bool less = true;
  if (at == std::string::npos) {
    at = clause.find(">=");
    less = false;
  }
  if (at == std::string::npos) {
    throw std::invalid_argument("bound clause needs <= or >=: " + clause);
  }
  const std::string lhs = Trim(clause.substr(0, at));
  const double rhs = ParseNumber(Trim(clause.substr(at + 2)));
  double value;
  if (const auto slash = lhs.find('/'); slash != std::string::npos) {
    value = Field(r, lhs.substr(0, slash)) / Field(r, lhs.substr(slash + 1));
  } else {
    value = Field(r, lhs);
  }
  if (std::isnan(value) || std::isnan(rhs)) return false;
  return less ? value <= rhs : value >= rhs;
}

}  // namespace

double RecomputeRatio(const RunReport& report) {
  if (!std::isnan(report.ew_opt)) return report.ew_opt / report.ew_eq;
  return report.sw_opt / report.sw_eq;
}

bool EvaluateBound(const RunReport& report) {
  if (report.bound == "none") return true;
  std::stringstream in(report.bound);
  std::string clause;
  bool any = false;
  while (std::getline(in, clause, ';')) {
    if (Trim(clause).empty()) continue;
    any = true;
    if (!Clause(report, clause)) return false;
  }
  if (!any) throw std::invalid_argument("empty bound");
  return true;
}

ReportFormat ParseFormat(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw std::invalid_argument("format must be csv or json");
}

void WriteReports(const std::vector<RunReport>& reports, ReportFormat format,
                  std::ostream& out) {
  if (format == ReportFormat::kJson) {
    Json rows = Json::array();
    for (const auto& r : reports) {
      rows.push_back({{"instance_id", r.instance_id},
                      {"mechanism", r.mechanism},
                      {"eq_kind", r.eq_kind},
                      {"eps", JsonNumber(r.eps)},
                      {"eps_ci", JsonNumber(r.eps_ci)},
                      {"sw_eq", JsonNumber(r.sw_eq)},
                      {"ew_eq", JsonNumber(r.ew_eq)},
                      {"sw_opt", JsonNumber(r.sw_opt)},
                      {"ew_opt", JsonNumber(r.ew_opt)},
                      {"ratio", JsonNumber(r.ratio)},
                      {"bound", r.bound},
                      {"pass", r.pass},
                      {"seed", r.seed},
                      {"wallclock_ms", JsonNumber(r.wallclock_ms)}});
    }
    // 17 significant digits, as in the CSV.
    out << rows.dump(2) << "\n";
    return;
  }
  for (std::size_t k = 0; k < std::size(kColumns); ++k) {
    out << (k ? "," : "") << kColumns[k];
  }
  out << "\n";
  for (const auto& r : reports) {
    out << CsvField(r.instance_id) << ',' << CsvField(r.mechanism) << ','
        << CsvField(r.eq_kind) << ',' << FormatNumber(r.eps) << ','
        << FormatNumber(r.eps_ci) << ',' << FormatNumber(r.sw_eq) << ','
        << FormatNumber(r.ew_eq) << ',' << FormatNumber(r.sw_opt) << ','
        << FormatNumber(r.ew_opt) << ',' << FormatNumber(r.ratio) << ','
        << CsvField(r.bound) << ',' << (r.pass ? "true" : "false") << ','
        << r.seed << ',' << FormatNumber(r.wallclock_ms) << "\n";
  }
}

void EmitReport(const std::vector<RunReport>& reports, ReportFormat format,
                const std::string& path) {
  if (reports.empty()) throw std::invalid_argument("no reports to emit");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  WriteReports(reports, format, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<RunReport> ReadCsvReports(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  if (SplitCsvLine(line).size() != std::size(kColumns)) {
    throw std::invalid_argument("CSV header has the wrong column count");
  }
  std::vector<RunReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != std::size(kColumns)) {
      throw std::invalid_argument("CSV row has the wrong column count");
    }
    RunReport r;
    r.instance_id = f[0];
    r.mechanism = f[1];
    r.eq_kind = f[2];
    r.eps = ParseNumber(f[3]);
    r.eps_ci = ParseNumber(f[4]);
    r.sw_eq = ParseNumber(f[5]);
    r.ew_eq = ParseNumber(f[6]);
    r.sw_opt = ParseNumber(f[7]);
    r.ew_opt = ParseNumber(f[8]);
    r.ratio = ParseNumber(f[9]);
    r.bound = f[10];
    r.pass = f[11] == "true";
    r.seed = std::stoull(f[12]);
    r.wallclock_ms = ParseNumber(f[13]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunReport> ReadJsonReports(std::istream& in) {
  const Json rows = Json::parse(in);
  std::vector<RunReport> out;
  for (const auto& j : rows) {
    RunReport r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.mechanism = j.at("mechanism").get<std::string>();
    r.eq_kind = j.at("eq_kind").get<std::string>();
    r.eps = JsonToNumber(j.at("eps"));
    r.eps_ci = JsonToNumber(j.at("eps_ci"));
    r.sw_eq = JsonToNumber(j.at("sw_eq"));
    r.ew_eq = JsonToNumber(j.at("ew_eq"));
    r.sw_opt = JsonToNumber(j.at("sw_opt"));
    r.ew_opt = JsonToNumber(j.at("ew_opt"));
    r.ratio = JsonToNumber(j.at("ratio"));
    r.bound = j.at("bound").get<std::string>();
    r.pass = j.at("pass").get<bool>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.wallclock_ms = JsonToNumber(j.at("wallclock_ms"));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace proplab::harness
