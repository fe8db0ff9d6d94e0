#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rcover/report.hpp"

using namespace rcover;

TEST_SUITE("report") {
  TEST_CASE("verdict table") {
    CHECK(make_check("a", "", 0.5, 0.4, 0.6, 0.45, TheoryKind::exact).verdict == Verdict::pass);
    CHECK(make_check("a", "", 0.5, 0.4, 0.6, 0.65, TheoryKind::exact).verdict == Verdict::fail);
    CHECK(make_check("a", "", 0.5, 0.4, 0.6, 0.4, TheoryKind::upper_bound).verdict == Verdict::pass);
    CHECK(make_check("a", "", 0.5, 0.4, 0.6, 0.39, TheoryKind::upper_bound).verdict == Verdict::fail);
    CHECK(make_check("a", "", 0.5, 0.4, 0.6, 0.6, TheoryKind::lower_bound).verdict == Verdict::pass);
    CHECK(make_check("a", "", 0.5, 0.4, 0.6, 0.61, TheoryKind::lower_bound).verdict == Verdict::fail);
    CHECK(make_check("a", "", 0.5, 0.4, 0.6, NAN, TheoryKind::exact).verdict == Verdict::inconclusive);
    CHECK(make_check("a", "", NAN, 0.4, 0.6, 0.5, TheoryKind::exact).verdict == Verdict::inconclusive);
  }

  TEST_CASE("trend rule") {
    auto tr = [](std::vector<double> s, double dir) { return make_check("t", "", 0, 0, 0, dir, TheoryKind::limit_trend, s).verdict; };
    CHECK(tr({0.3, 0.2, 0.1}, -1) == Verdict::pass);
    CHECK(tr({0.3, 0.2, 0.2}, -1) == Verdict::fail);
    CHECK(tr({0.3, 0.0, 0.0}, -1) == Verdict::pass);
    CHECK(tr({0.5, 1.0, 1.0}, 1) == Verdict::pass);
    CHECK(tr({0.5, 0.9, 0.8}, 1) == Verdict::fail);
    CHECK(tr({0.1, 0.2}, 1) == Verdict::inconclusive);
    CHECK(tr({0.1, 0.2, 0.3}, 0) == Verdict::inconclusive);
  }

  TEST_CASE("finalize") {
    ExperimentReport r;
    r.checks.push_back(make_check("a", "", 0.5, 0.4, 0.6, 0.5, TheoryKind::exact));
    r.checks.push_back(make_check("info", "", 0.5, 0.4, 0.6, NAN, TheoryKind::exact));
    r.finalize();
    CHECK(r.verdict == Verdict::pass);
    r.checks.push_back(make_check("t", "", 0, 0, 0, 0, TheoryKind::limit_trend, {1, 2, 3}));
    r.finalize();
    CHECK(r.verdict == Verdict::inconclusive);
    r.checks.push_back(make_check("b", "", 0.5, 0.4, 0.6, 0.9, TheoryKind::exact));
    r.finalize();
    CHECK(r.verdict == Verdict::fail);
    ExperimentReport info;
    info.checks.push_back(make_check("info", "", 0.5, 0.4, 0.6, NAN, TheoryKind::exact));
    info.finalize();
    CHECK(info.verdict == Verdict::inconclusive);
    ExperimentReport empty;
    CHECK_THROWS(empty.primary());
  }

  TEST_CASE("csv") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(0.1) == "0.1");
    ExperimentReport r;
    r.name = "x";
    r.checks.push_back(make_check("c", "n=1,2", 0.25, 0.125, 0.5, NAN, TheoryKind::upper_bound));
    std::ostringstream os;
    write_csv(os, {r});
    CHECK(os.str() == std::string(kReportCsvHeader) + "\r\nx,c,\"n=1,2\",0.25,0.125,0.5,nan,upper_bound,inconclusive\r\n");
  }

  TEST_CASE("json") {
    ExperimentReport r;
    r.name = "x";
    r.parameters = {{"k", 1}};
    r.checks.push_back(make_check("c", "s", 0.25, 0.125, 0.5, 0.3, TheoryKind::exact));
    r.checks.push_back(make_check("t", "s", 0, 0, 0, -1, TheoryKind::limit_trend, {0.3, 0.2, 0.1}));
    r.checks.push_back(make_check("i", "s", 0.1, 0.0, 0.2, NAN, TheoryKind::exact));
    r.finalize();
    auto j = to_json(r);
    CHECK(j["verdict"] == "pass");
    CHECK(j["estimate"] == 0.25);
    CHECK(j["theory_kind"] == "exact");
    CHECK(j["checks"].size() == 3);
    CHECK(j["checks"][1]["series"].size() == 3);
    CHECK(j["checks"][2]["theory_value"] == "nan");
    CHECK(to_json_text(r) == to_json_text(r));
    CHECK(nlohmann::json::parse(to_json_text(r)) == j);
  }
}
