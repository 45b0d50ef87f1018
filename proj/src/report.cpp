#include "pshlab/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "pshlab/errors.hpp"

namespace pshlab {

namespace {

std::optional<double> present(double x) {
  if (std::isnan(x)) return std::nullopt;
  return x;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_number(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(const std::optional<double>& x) {
  if (!x) return "null";
  if (!std::isfinite(*x)) return json_string(format_number(*x));
  return format_number(*x);
}

}  // namespace

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InputError("unknown output format '" + s + "' (csv or json)");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string params_json(const Params& params, const std::string& note) {
  std::string out = "{";
  bool first = true;
  auto key = [&](const std::string& k) {
    if (!first) out += ',';
    first = false;
    out += json_string(k) + ':';
  };
  for (const auto& [k, v] : params) {
    key(k);
    if (const double* d = std::get_if<double>(&v))
      out += json_number(*d);
    else
      out += json_string(std::get<std::string>(v));
  }
  if (!note.empty()) {
    key("note");
    out += json_string(note);
  }
  return out + "}";
}

ReportRow to_row(const std::string& scenario, const InequalityReport& r) {
  ReportRow row;
  row.scenario = scenario;
  row.name = r.name;
  row.param_json = params_json(r.params, r.reason);
  row.verdict = to_string(r.verdict);
  row.lhs = present(r.lhs);
  row.rhs = present(r.rhs);
  if (r.quad) {
    row.value = present(r.quad->value);
    row.abs_err = present(r.quad->abs_err);
    row.tail_exponent = present(r.quad->tail_exponent);
    row.floor_sensitivity = present(r.quad->floor_sensitivity);
  }
  return row;
}

ReportRow to_row(const std::string& scenario, const std::string& name, const Params& params,
                 const IntegralVerdict& v) {
  ReportRow row;
  row.scenario = scenario;
  row.name = name;
  row.param_json = params_json(params, v.note);
  row.verdict = to_string(v.kind);
  row.value = present(v.value);
  row.abs_err = present(v.abs_err);
  row.tail_exponent = present(v.tail_exponent);
  row.floor_sensitivity = present(v.floor_sensitivity);
  return row;
}

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << "scenario,name,param_json,verdict,lhs,rhs,value,abs_err,tail_exponent,floor_sensitivity\n";
  for (const auto& r : rows) {
    os << csv_field(r.scenario) << ',' << csv_field(r.name) << ',' << csv_field(r.param_json) << ','
       << csv_field(r.verdict) << ',' << csv_number(r.lhs) << ',' << csv_number(r.rhs) << ','
       << csv_number(r.value) << ',' << csv_number(r.abs_err) << ',' << csv_number(r.tail_exponent)
       << ',' << csv_number(r.floor_sensitivity) << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? ",\n " : "\n ") << "{\"scenario\":" << json_string(r.scenario)
       << ",\"name\":" << json_string(r.name) << ",\"param_json\":" << json_string(r.param_json)
       << ",\"verdict\":" << json_string(r.verdict) << ",\"lhs\":" << json_number(r.lhs)
       << ",\"rhs\":" << json_number(r.rhs) << ",\"value\":" << json_number(r.value)
       << ",\"abs_err\":" << json_number(r.abs_err)
       << ",\"tail_exponent\":" << json_number(r.tail_exponent)
       << ",\"floor_sensitivity\":" << json_number(r.floor_sensitivity) << '}';
  }
  os << (rows.empty() ? "]\n" : "\n]\n");
}

void write_rows(std::ostream& os, const std::vector<ReportRow>& rows, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv)
    write_csv(os, rows);
  else
    write_json(os, rows);
}

}  // namespace pshlab
