#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "rcover/config.hpp"
#include "rcover/target_sets.hpp"

namespace rcover {

namespace {

const char* kFooter = R"(Experiments: moment_lemma, coincidence_lemma, covering_lemma, dichotomy, prop13, prop14.

Writes <out>/<experiment>.json and <out>/<experiment>.csv. The CSV has one
row per check, RFC 4180 quoting, CRLF line ends and the header
  experiment,check,setting,estimate,ci_lo,ci_hi,theory_value,theory_kind,verdict
ci_lo and ci_hi bound the estimate; theory_kind is exact, upper_bound,
lower_bound or limit_trend (theory_value is then the predicted direction).
A theory_value of nan marks an informational row.

Exit status: 0 pass or inconclusive, 1 fail, 2 config or precondition error,
3 infeasible schedule.)";

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random covering set experiments"};
  app.footer(kFooter);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials, threads;
  std::optional<std::string> out_dir, format;
  app.add_option("--config", config_path, "YAML config file")->required();
  app.add_option("--seed", seed, "Base seed (overrides the config)");
  app.add_option("--trials", trials, "Trials (overrides the config)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker thread cap (0 = hardware)");
  app.add_option("--format", format, "json, csv or both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
    if (out_dir) cfg.out = *out_dir;
    if (format) cfg.format = parse_format(*format);
    validate(cfg);

    ExperimentReport rep = run_experiment(cfg);
    std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);
    if (cfg.format != OutputFormat::csv) write_file(dir / (cfg.experiment + ".json"), to_json_text(rep));
    if (cfg.format != OutputFormat::json) {
      std::ostringstream csv;
      write_csv(csv, {rep});
      write_file(dir / (cfg.experiment + ".csv"), csv.str());
    }
    std::size_t failed = 0;
    for (const auto& c : rep.checks) failed += c.verdict == Verdict::fail;
    out << rep.name << ": " << to_string(rep.verdict) << " (" << rep.checks.size() << " checks, " << failed
        << " failed)\n";
    return rep.verdict == Verdict::fail ? 1 : 0;
  } catch (const InfeasibleSchedule& e) {
    err << "infeasible schedule: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    err << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rcover
