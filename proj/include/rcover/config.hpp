#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcover/length_sequences.hpp"
#include "rcover/report.hpp"

namespace rcover {

// Malformed or invalid configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { json, csv, both };

struct RunConfig {
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 1;
  int trials = 1000;
  int threads = 0;
  std::string out = ".";
  OutputFormat format = OutputFormat::both;
};

// YAML text:
//   experiment: <name>
//   seed: <u64>
//   trials: <n>
//   threads: <n>      (optional)
//   out: <dir>        (optional)
//   format: json|csv|both (optional)
//   params: { ... }   keys depend on the experiment
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

const std::vector<std::string>& experiment_names();

// Checks names and parameter types of every key, then runs the experiment.
void validate(const RunConfig& cfg);
ExperimentReport run_experiment(const RunConfig& cfg);

// {variant, alpha|blocks|values, d, c}
std::string spec_to_yaml(const LengthSequenceSpec& spec);
LengthSequenceSpec spec_from_yaml(const std::string& text);
LengthSequenceSpec spec_from_json(const nlohmann::json& j);

OutputFormat parse_format(const std::string& s);

}  // namespace rcover
