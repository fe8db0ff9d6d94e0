#include "rcover/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rcover {

std::string to_string(TheoryKind k) {
  switch (k) {
    case TheoryKind::exact: return "exact";
    case TheoryKind::upper_bound: return "upper_bound";
    case TheoryKind::lower_bound: return "lower_bound";
    case TheoryKind::limit_trend: return "limit_trend";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

Verdict trend_verdict(const std::vector<double>& s, double direction) {
  if (direction == 0.0 || s.size() < 3) return Verdict::inconclusive;
  for (std::size_t i = 1; i < s.size(); ++i) {
    double a = s[i - 1], b = s[i];
    if (direction > 0) {
      if (b > a || (a == 1.0 && b == 1.0)) continue;
    } else {
      if (b < a || (a == 0.0 && b == 0.0)) continue;
    }
    return Verdict::fail;
  }
  return Verdict::pass;
}

}  // namespace

Verdict evaluate(const Check& c) {
  if (std::isnan(c.estimate) || std::isnan(c.theory_value)) return Verdict::inconclusive;
  switch (c.kind) {
    case TheoryKind::exact: return c.lo <= c.theory_value && c.theory_value <= c.hi ? Verdict::pass : Verdict::fail;
    case TheoryKind::upper_bound: return c.lo <= c.theory_value ? Verdict::pass : Verdict::fail;
    case TheoryKind::lower_bound: return c.hi >= c.theory_value ? Verdict::pass : Verdict::fail;
    case TheoryKind::limit_trend: return trend_verdict(c.series, c.theory_value);
  }
  return Verdict::inconclusive;
}

Check make_check(std::string name, std::string setting, double estimate, double lo, double hi, double theory,
                 TheoryKind kind, std::vector<double> series) {
  Check c{std::move(name), std::move(setting), estimate, lo, hi, theory, kind, std::move(series), Verdict::inconclusive};
  c.verdict = evaluate(c);
  return c;
}

void ExperimentReport::finalize() {
  bool any_fail = false, any_open = false;
  int graded = 0;
  for (const auto& c : checks) {
    if (std::isnan(c.theory_value)) continue;
    ++graded;
    any_fail = any_fail || c.verdict == Verdict::fail;
    any_open = any_open || c.verdict == Verdict::inconclusive;
  }
  verdict = any_fail ? Verdict::fail : (any_open || graded == 0 ? Verdict::inconclusive : Verdict::pass);
}

const Check& ExperimentReport::primary() const {
  if (checks.empty()) throw std::logic_error("report has no checks");
  return checks.front();
}

namespace {

nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["parameters"] = r.parameters;
  j["verdict"] = to_string(r.verdict);
  if (!r.checks.empty()) {
    const auto& p = r.primary();
    j["estimate"] = finite_or_string(p.estimate);
    j["interval"] = {finite_or_string(p.lo), finite_or_string(p.hi)};
    j["theory_value"] = finite_or_string(p.theory_value);
    j["theory_kind"] = to_string(p.kind);
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["setting"] = c.setting;
    cj["estimate"] = finite_or_string(c.estimate);
    cj["interval"] = {finite_or_string(c.lo), finite_or_string(c.hi)};
    cj["theory_value"] = finite_or_string(c.theory_value);
    cj["theory_kind"] = to_string(c.kind);
    if (!c.series.empty()) {
      nlohmann::json s = nlohmann::json::array();
      for (double v : c.series) s.push_back(finite_or_string(v));
      cj["series"] = s;
    }
    cj["verdict"] = to_string(c.verdict);
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j;
}

std::string to_json_text(const ExperimentReport& r) { return to_json(r).dump(2) + "\n"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const std::vector<ExperimentReport>& reports) {
  os << kReportCsvHeader << "\r\n";
  for (const auto& r : reports)
    for (const auto& c : r.checks)
      os << csv_field(r.name) << ',' << csv_field(c.name) << ',' << csv_field(c.setting) << ','
         << format_double(c.estimate) << ',' << format_double(c.lo) << ',' << format_double(c.hi) << ','
         << format_double(c.theory_value) << ',' << to_string(c.kind) << ',' << to_string(c.verdict) << "\r\n";
}

}  // namespace rcover
