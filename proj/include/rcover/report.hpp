#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace rcover {

enum class TheoryKind { exact, upper_bound, lower_bound, limit_trend };
enum class Verdict { pass, fail, inconclusive };

std::string to_string(TheoryKind k);
std::string to_string(Verdict v);

// One comparison of an estimate against a theoretical value.
//   exact:        pass iff lo <= theory <= hi
//   upper_bound:  pass iff lo <= theory (estimate may exceed the bound by the CI half-width)
//   lower_bound:  pass iff hi >= theory
//   limit_trend:  theory_value is the predicted direction of `series`
//                 (+1 increasing, -1 decreasing, 0 none predicted -> inconclusive);
//                 pass iff the series is strictly monotone in that direction
//                 over at least 3 settings. Ties are tolerated only at the
//                 limit itself (0 when decreasing, 1 when increasing).
struct Check {
  std::string name;
  std::string setting;
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double theory_value = 0.0;
  TheoryKind kind = TheoryKind::exact;
  std::vector<double> series;
  Verdict verdict = Verdict::inconclusive;
};

Verdict evaluate(const Check& c);

// Builds a check and fills in its verdict.
Check make_check(std::string name, std::string setting, double estimate, double lo, double hi, double theory,
                 TheoryKind kind, std::vector<double> series = {});

struct ExperimentReport {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<Check> checks;
  Verdict verdict = Verdict::inconclusive;

  // fail if any check fails, else inconclusive if any is, else pass.
  // Checks with a NaN theory value are informational and not graded.
  void finalize();
  const Check& primary() const;
};

nlohmann::json to_json(const ExperimentReport& r);
std::string to_json_text(const ExperimentReport& r);

// Columns: experiment,check,setting,estimate,ci_lo,ci_hi,theory_value,theory_kind,verdict
inline constexpr const char* kReportCsvHeader =
    "experiment,check,setting,estimate,ci_lo,ci_hi,theory_value,theory_kind,verdict";
void write_csv(std::ostream& os, const std::vector<ExperimentReport>& reports);

std::string csv_field(const std::string& s);
std::string format_double(double v);

}  // namespace rcover
