// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rcover/harness.hpp"
#include "rcover/length_sequences.hpp"
#include "rcover/rng.hpp"
#include "rcover/target_sets.hpp"

using namespace rcover;

namespace {

using Suite = std::function<ExperimentReport()>;

const Check* find(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool all_pass(const ExperimentReport& r, const std::string& name) {
  bool any = false;
  for (const auto& c : r.checks) {
    if (c.name != name) continue;
    any = true;
    if (c.verdict != Verdict::pass) return false;
  }
  return any;
}

std::string failed_checks(const ExperimentReport& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (c.verdict == Verdict::fail) s += " " + c.name + "[" + c.setting + "]";
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LengthSequenceSpec random_block_spec(const CounterRng& rng, std::uint64_t i) {
  int nb = 3 + static_cast<int>(rng.bits(20, i) % 6);
  std::vector<LengthBlock> blocks;
  double log2_len = -1.0 - 3.0 * rng.uniform(21, i);
  double log2_first = 0.0;
  for (int b = 0; b < nb; ++b) {
    blocks.push_back({log2_len, b == 0 ? Magnitude::exact(1) : Magnitude::ceil_exp2(log2_first)});
    log2_first += 1.0 + 20.0 * rng.uniform(22, 8 * i + b);
    log2_len -= 1.0 + 30.0 * rng.uniform(23, 8 * i + b);
  }
  return LengthSequenceSpec::block_constant(blocks, Magnitude::ceil_exp2(log2_first));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const Outcome& o, double secs, double limit) {
  bool ok = o.pass && (limit <= 0 || secs < limit);
  failures += !ok;
  std::printf("criterion %d: %s %s (%.1f s", id, ok ? "PASS" : "FAIL", o.detail.c_str(), secs);
  if (limit > 0) std::printf(", limit %.0f s", limit);
  std::printf(")\n");
  std::fflush(stdout);
}

}  // namespace

int main() {
  const auto pl = LengthSequenceSpec::power_law(0.5);
  std::vector<std::pair<std::string, Suite>> suites;
  std::map<std::string, std::string> first_json;
  auto run = [&](const std::string& key, Suite s) {
    suites.push_back({key, s});
    ExperimentReport r = s();
    first_json[key] = to_json_text(r);
    return r;
  };

  {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o{true, ""};
    for (int n0 : {0, 2})
      for (std::uint64_t last : {257u, 1025u}) {
        auto r = run("moment n0=" + std::to_string(n0) + " last=" + std::to_string(last),
                     [=] { return verify_moment_lemma(n0, 1, pl, StageWindow(2, last), 10000, 101); });
        bool ok = all_pass(r, "mean") && all_pass(r, "second_moment") && all_pass(r, "deviation_frequency");
        o.pass = o.pass && ok;
        o.detail += "n0=" + std::to_string(n0) + ",L=" + r.parameters["L_n"].dump() + ":" + (ok ? "ok " : "bad" + failed_checks(r) + " ");
      }
    report(1, o, seconds_since(t0), 60);
  }

  {
    auto t0 = std::chrono::steady_clock::now();
    auto r = run("coincidence", [] { return verify_coincidence_lemma(0, {8, 10, 12}, 0.6, 0.6, 1, 10000, 102); });
    bool ok = all_pass(r, "miss_frequency") && all_pass(r, "bound_trend");
    std::string d = "miss";
    for (const auto& c : r.checks)
      if (c.name == "miss_frequency") d += " " + format_double(c.estimate) + "<=" + format_double(c.theory_value);
    report(2, {ok, d + failed_checks(r)}, seconds_since(t0), 60);
  }

  {
    auto t0 = std::chrono::steady_clock::now();
    auto r = run("covering", [] {
      return verify_covering_lemma({std::ldexp(1.0, -6), std::ldexp(1.0, -8), std::ldexp(1.0, -10)}, 0.5, 0.9, 1.0, 1.0,
                                   10000, 103);
    });
    bool ok = all_pass(r, "noncover_frequency") && all_pass(r, "noncover_trend");
    std::string d = "noncover";
    for (const auto& c : r.checks)
      if (c.name == "noncover_frequency") d += " " + format_double(c.estimate) + "<=" + format_double(c.theory_value);
    report(3, {ok, d + failed_checks(r)}, seconds_since(t0), 120);
  }

  {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<StageWindow> cw{StageWindow(876, 1000), StageWindow(8751, 10000), StageWindow(87501, 100000)};
    auto cr = run("dichotomy cantor", [=] {
      return dichotomy_experiment(pl, TargetSetSpec::self_similar(1.0 / 3.0, 2), cw, 1000, 104);
    });
    std::vector<StageWindow> pw{StageWindow(100, 1000), StageWindow(1000, 10000), StageWindow(10000, 100000)};
    auto pr = run("dichotomy point", [=] { return dichotomy_experiment(pl, TargetSetSpec::single_point(), pw, 30000, 105); });
    const Check* ct = find(cr, "hit_trend");
    const Check* pt = find(pr, "hit_trend");
    bool cantor_ok = ct && ct->verdict == Verdict::pass && ct->theory_value > 0 && ct->series.back() > 0.9;
    bool point_ok = pt && pt->verdict == Verdict::pass && pt->theory_value < 0 && all_pass(pr, "deepest_hit_exact");
    std::string d = "cantor";
    if (ct)
      for (double v : ct->series) d += " " + format_double(v);
    d += "; point";
    if (pt)
      for (double v : pt->series) d += " " + format_double(v);
    if (const Check* e = find(pr, "deepest_hit_exact"))
      d += " exact " + format_double(e->theory_value) + " in [" + format_double(e->lo) + "," + format_double(e->hi) + "]";
    report(4, {cantor_ok && point_ok, d}, seconds_since(t0), 300);
  }

  {
    auto t0 = std::chrono::steady_clock::now();
    auto r = run("prop13", [] { return prop13_experiment({0.5, 0.75, 0.875}, {0.5, 0.25, 0.125}, 3, 1000, 106); });
    bool ok = all_pass(r, "block_hit_frequency") && all_pass(r, "block_hit_trend");
    std::string d = "blocks";
    for (const auto& c : r.checks)
      if (c.name == "block_hit_frequency") d += " " + format_double(c.estimate) + "<=" + format_double(c.theory_value);
    report(5, {ok, d + failed_checks(r)}, seconds_since(t0), 300);
  }

  {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o{true, ""};
    for (auto [t, a] : {std::pair{0.3, 0.6}, std::pair{0.6, 0.3}}) {
      auto r = run("prop14 t=" + format_double(t), [=] { return prop14_experiment(t, a, 3, 5, 107); });
      bool ok = all_pass(r, "box_count_slope") && all_pass(r, "local_dimension");
      o.pass = o.pass && ok;
      o.detail += "(t,alpha)=(" + format_double(t) + "," + format_double(a) + ") slope " +
                  format_double(find(r, "box_count_slope")->estimate) + " local";
      for (const auto& c : r.checks)
        if (c.name == "local_dimension") o.detail += " " + format_double(std::round(c.estimate * 1e4) / 1e4);
      o.detail += ok ? "; " : failed_checks(r) + "; ";
    }
    report(6, o, seconds_since(t0), 600);
  }

  {
    auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(108);
    int equal = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      LengthSequenceSpec spec =
          (i % 2 == 0) ? LengthSequenceSpec::power_law(0.01 + 0.99 * rng.uniform(0, i)) : random_block_spec(rng, i);
      equal += alpha_exponent(spec).value == critical_sum_exponent(spec).value;
    }
    auto c_pl = condition_c_diagnose(scale_census(pl, Magnitude::exact(1000000)));
    auto p13 = covering_sequence(build_schedule_prop13({0.5, 0.75, 0.875}, {0.5, 0.25, 0.125}, 3));
    auto c_13 = condition_c_diagnose(scale_census(p13, p13.last_index()));
    bool ok = equal == 100 && c_pl.verdict == ConditionCVerdict::consistent && c_13.verdict == ConditionCVerdict::violated;
    report(7, {ok, "alpha==critical on " + std::to_string(equal) + "/100; condition C power law " + to_string(c_pl.verdict) +
                       ", prop13 census " + to_string(c_13.verdict)},
           seconds_since(t0), 10);
  }

  {
    auto t0 = std::chrono::steady_clock::now();
    int same = 0;
    std::string diff;
    for (const auto& [key, s] : suites) {
      if (to_json_text(s()) == first_json[key])
        ++same;
      else
        diff += " " + key;
    }
    report(8, {same == static_cast<int>(suites.size()),
               std::to_string(same) + "/" + std::to_string(suites.size()) + " reports byte-identical" + diff},
           seconds_since(t0), 0);
  }

  return failures == 0 ? 0 : 1;
}
