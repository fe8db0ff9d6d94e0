#include "rcover/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rcover/harness.hpp"

namespace rcover {

namespace {

using nlohmann::json;

json scalar_to_json(const YAML::Node& n) {
  const std::string& s = n.Scalar();
  if (n.Tag() == "!") return s;  // quoted
  if (s == "true" || s == "false") return s == "true";
  {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return v;
    std::uint64_t u = 0;
    auto [p2, ec2] = std::from_chars(s.data(), s.data() + s.size(), u);
    if (ec2 == std::errc() && p2 == s.data() + s.size()) return u;
  }
  {
    double d = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec == std::errc() && p == s.data() + s.size()) return d;
  }
  return s;
}

json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar_to_json(n);
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& e : n) a.push_back(yaml_to_json(e));
      return a;
    }
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : n) o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return o;
    }
  }
  return nullptr;
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a mapping");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError("missing key '" + key + "' in " + where);
  return *it;
}

double get_double(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

std::int64_t get_int(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' in " + where + " must be an integer");
  return v.get<std::int64_t>();
}

std::vector<double> get_doubles(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError("'" + key + "' in " + where + " must be a number or a list");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError("'" + key + "' in " + where + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> get_ints(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  std::vector<int> out;
  auto one = [&](const json& e) {
    if (!e.is_number_integer()) throw ConfigError("'" + key + "' in " + where + " must hold integers");
    out.push_back(e.get<int>());
  };
  if (v.is_array())
    for (const auto& e : v) one(e);
  else
    one(v);
  return out;
}

Magnitude magnitude_from(const json& v, const std::string& where) {
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    auto u = v.get<std::uint64_t>();
    if (u >= kExactLimit) return Magnitude::from_log2(std::log2(static_cast<double>(u)));
    return Magnitude::exact(u);
  }
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.rfind("2^", 0) == 0) {
      double x = 0.0;
      auto [p, ec] = std::from_chars(s.data() + 2, s.data() + s.size(), x);
      if (ec == std::errc() && p == s.data() + s.size()) return Magnitude::from_log2(x);
    }
  }
  throw ConfigError("bad index in " + where + " (want an integer or \"2^x\")");
}

StageWindow window_from(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
    throw ConfigError(where + " must be [first, last]");
  auto a = v[0].get<std::int64_t>(), b = v[1].get<std::int64_t>();
  if (a < 1 || b < a) throw ConfigError(where + " must satisfy 1 <= first <= last");
  return StageWindow(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
}

TargetSetSpec target_from(const json& j) {
  const std::string where = "params.target";
  if (!j.is_object()) throw ConfigError(where + " must be a mapping");
  const json& kind = need(j, "kind", where);
  if (!kind.is_string()) throw ConfigError(where + ".kind must be a string");
  std::string k = kind.get<std::string>();
  if (k == "full_torus") {
    only_keys(j, {"kind"}, where);
    return TargetSetSpec::full_torus();
  }
  if (k == "single_point") {
    only_keys(j, {"kind"}, where);
    return TargetSetSpec::single_point();
  }
  if (k == "self_similar") {
    only_keys(j, {"kind", "ratio", "copies"}, where);
    return TargetSetSpec::self_similar(get_double(j, "ratio", where), static_cast<int>(get_int(j, "copies", where)));
  }
  throw ConfigError("unknown target kind '" + k + "' (full_torus, single_point, self_similar)");
}

struct Experiment {
  std::string name;
  std::set<std::string> keys;
  std::function<ExperimentReport(const RunConfig&)> run;
};

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> reg = {
      {"moment_lemma", {"n0", "d", "spec", "window"},
       [](const RunConfig& c) {
         const json& p = c.params;
         return verify_moment_lemma(static_cast<int>(get_int(p, "n0", "params")), static_cast<int>(get_int(p, "d", "params")),
                                    spec_from_json(need(p, "spec", "params")), window_from(need(p, "window", "params"), "params.window"),
                                    c.trials, c.seed, c.threads);
       }},
      {"coincidence_lemma", {"n0", "n", "s", "t", "d"},
       [](const RunConfig& c) {
         const json& p = c.params;
         return verify_coincidence_lemma(static_cast<int>(get_int(p, "n0", "params")), get_ints(p, "n", "params"),
                                         get_double(p, "s", "params"), get_double(p, "t", "params"),
                                         static_cast<int>(get_int(p, "d", "params")), c.trials, c.seed, c.threads);
       }},
      {"covering_lemma", {"eta", "beta", "alpha", "c", "C"},
       [](const RunConfig& c) {
         const json& p = c.params;
         return verify_covering_lemma(get_doubles(p, "eta", "params"), get_double(p, "beta", "params"),
                                      get_double(p, "alpha", "params"), get_double(p, "c", "params"),
                                      get_double(p, "C", "params"), c.trials, c.seed, c.threads);
       }},
      {"dichotomy", {"spec", "target", "windows"},
       [](const RunConfig& c) {
         const json& p = c.params;
         const json& ws = need(p, "windows", "params");
         if (!ws.is_array() || ws.empty()) throw ConfigError("params.windows must be a non-empty list");
         std::vector<StageWindow> windows;
         for (const auto& w : ws) windows.push_back(window_from(w, "params.windows entry"));
         return dichotomy_experiment(spec_from_json(need(p, "spec", "params")), target_from(need(p, "target", "params")),
                                     windows, c.trials, c.seed, c.threads);
       }},
      {"prop13", {"s", "eps", "depth"},
       [](const RunConfig& c) {
         const json& p = c.params;
         return prop13_experiment(get_doubles(p, "s", "params"), get_doubles(p, "eps", "params"),
                                  static_cast<int>(get_int(p, "depth", "params")), c.trials, c.seed, c.threads);
       }},
      {"prop14", {"t", "alpha", "depth"},
       [](const RunConfig& c) {
         const json& p = c.params;
         return prop14_experiment(get_double(p, "t", "params"), get_double(p, "alpha", "params"),
                                  static_cast<int>(get_int(p, "depth", "params")), c.trials, c.seed);
       }},
  };
  return reg;
}

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  std::string known;
  for (const auto& e : registry()) known += (known.empty() ? "" : ", ") + e.name;
  throw ConfigError("unknown experiment '" + name + "' (known: " + known + ")");
}

}  // namespace

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "both") return OutputFormat::both;
  throw ConfigError("format must be json, csv or both");
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  json j = yaml_to_json(root);
  only_keys(j, {"experiment", "seed", "trials", "threads", "out", "format", "params"}, "config");
  RunConfig cfg;
  const json& name = need(j, "experiment", "config");
  if (!name.is_string()) throw ConfigError("experiment must be a string");
  cfg.experiment = name.get<std::string>();
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0))
      throw ConfigError("seed must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("trials")) cfg.trials = static_cast<int>(get_int(j, "trials", "config"));
  if (j.contains("threads")) cfg.threads = static_cast<int>(get_int(j, "threads", "config"));
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("out must be a string");
    cfg.out = j["out"].get<std::string>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string()) throw ConfigError("format must be a string");
    cfg.format = parse_format(j["format"].get<std::string>());
  }
  if (j.contains("params")) cfg.params = j["params"];
  if (cfg.params.is_null()) cfg.params = json::object();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.push_back(e.name);
    return v;
  }();
  return names;
}

void validate(const RunConfig& cfg) {
  const Experiment& e = find_experiment(cfg.experiment);
  only_keys(cfg.params, e.keys, "params");
  for (const auto& k : e.keys)
    if (!cfg.params.contains(k)) throw ConfigError("missing key '" + k + "' in params");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
}

ExperimentReport run_experiment(const RunConfig& cfg) {
  validate(cfg);
  return find_experiment(cfg.experiment).run(cfg);
}

LengthSequenceSpec spec_from_json(const json& j) {
  const std::string where = "spec";
  if (!j.is_object()) throw ConfigError("spec must be a mapping");
  const json& v = need(j, "variant", where);
  if (!v.is_string()) throw ConfigError("spec.variant must be a string");
  std::string variant = v.get<std::string>();
  int d = j.contains("d") ? static_cast<int>(get_int(j, "d", where)) : 1;
  try {
    if (variant == "power_law") {
      only_keys(j, {"variant", "alpha", "c", "d"}, where);
      double c = j.contains("c") ? get_double(j, "c", where) : 0.5;
      return LengthSequenceSpec::power_law(get_double(j, "alpha", where), d, c);
    }
    if (variant == "block_constant") {
      only_keys(j, {"variant", "blocks", "end_index", "d"}, where);
      const json& bs = need(j, "blocks", where);
      if (!bs.is_array()) throw ConfigError("spec.blocks must be a list");
      std::vector<LengthBlock> blocks;
      for (const auto& b : bs) {
        only_keys(b, {"log2_length", "first_index"}, "spec.blocks entry");
        blocks.push_back({get_double(b, "log2_length", "spec.blocks entry"),
                          magnitude_from(need(b, "first_index", "spec.blocks entry"), "spec.blocks entry")});
      }
      return LengthSequenceSpec::block_constant(std::move(blocks), magnitude_from(need(j, "end_index", where), where), d);
    }
    if (variant == "explicit") {
      only_keys(j, {"variant", "values", "d"}, where);
      return LengthSequenceSpec::explicit_lengths(get_doubles(j, "values", where), d);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid spec: ") + e.what());
  }
  throw ConfigError("unknown spec variant '" + variant + "' (power_law, block_constant, explicit)");
}

std::string spec_to_yaml(const LengthSequenceSpec& spec) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          out << YAML::Key << "variant" << YAML::Value << "power_law";
          out << YAML::Key << "alpha" << YAML::Value << v.alpha;
          out << YAML::Key << "c" << YAML::Value << v.c;
        } else if constexpr (std::is_same_v<T, BlockConstant>) {
          auto index = [&](const Magnitude& m) {
            if (m.is_exact()) out << m.value();
            else out << YAML::DoubleQuoted << ("2^" + format_double(m.log2()));
          };
          out << YAML::Key << "variant" << YAML::Value << "block_constant";
          out << YAML::Key << "blocks" << YAML::Value << YAML::BeginSeq;
          for (const auto& b : v.blocks) {
            out << YAML::BeginMap << YAML::Key << "log2_length" << YAML::Value << b.log2_length;
            out << YAML::Key << "first_index" << YAML::Value;
            index(b.first_index);
            out << YAML::EndMap;
          }
          out << YAML::EndSeq;
          out << YAML::Key << "end_index" << YAML::Value;
          index(v.end_index);
        } else {
          out << YAML::Key << "variant" << YAML::Value << "explicit";
          out << YAML::Key << "values" << YAML::Value << YAML::Flow << v.values;
        }
      },
      spec.variant());
  out << YAML::Key << "d" << YAML::Value << spec.dim();
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

LengthSequenceSpec spec_from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("spec parse error: ") + e.what());
  }
  return spec_from_json(yaml_to_json(root));
}

}  // namespace rcover
