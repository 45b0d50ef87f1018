#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pshlab/inequalities.hpp"
#include "pshlab/quad.hpp"

namespace pshlab {

/// One output line: scenario,name,param_json,verdict,lhs,rhs,value,abs_err,tail_exponent,floor_sensitivity.
struct ReportRow {
  std::string scenario;
  std::string name;
  std::string param_json;
  std::string verdict;
  std::optional<double> lhs, rhs, value, abs_err, tail_exponent, floor_sensitivity;
};

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& s);

/// Shortest round-trip decimal; "inf" / "-inf" for infinities, "nan" for NaN.
std::string format_number(double x);

/// Flat JSON object of the parameters, in order; a non-empty `note` is appended.
std::string params_json(const Params& params, const std::string& note = "");

ReportRow to_row(const std::string& scenario, const InequalityReport& r);
ReportRow to_row(const std::string& scenario, const std::string& name, const Params& params,
                 const IntegralVerdict& v);

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows);
void write_json(std::ostream& os, const std::vector<ReportRow>& rows);
void write_rows(std::ostream& os, const std::vector<ReportRow>& rows, OutputFormat fmt);

}  // namespace pshlab
