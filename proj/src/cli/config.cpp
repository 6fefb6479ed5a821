#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "oneway/cli.hpp"
#include "oneway/reference_data.hpp"

namespace oneway::cli {

namespace {

const std::set<std::string> kExperiments{"witness", "grover", "gate", "visibility"};

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void reject_unknown(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(path.empty() ? "<root>" : path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double get_double(const YAML::Node& node, const std::string& field) {
  double v = 0.0;
  try {
    v = node.as<double>();
  } catch (const YAML::Exception&) {
    fail(field, "expected a number");
  }
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

double get_unit_interval(const YAML::Node& node, const std::string& field) {
  const double v = get_double(node, field);
  if (v < 0.0 || v > 1.0) fail(field, "must lie in [0, 1]");
  return v;
}

double get_positive(const YAML::Node& node, const std::string& field) {
  const double v = get_double(node, field);
  if (!(v > 0.0)) fail(field, "must be positive");
  return v;
}

std::uint64_t get_u64(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar() || node.Scalar().empty() || node.Scalar().front() == '-') fail(field, "expected an unsigned integer");
  try {
    return node.as<std::uint64_t>();
  } catch (const YAML::Exception&) {
    fail(field, "expected an unsigned integer");
  }
}

bool get_bool(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    fail(field, "expected true or false");
  }
}

std::string get_string(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(field, "expected a string");
  return node.as<std::string>();
}

void parse_noise(const YAML::Node& node, ExperimentConfig& config) {
  if (node.IsScalar() && node.Scalar() == "ideal") {
    config.noise = photonics::NoiseModel{};
    return;
  }
  reject_unknown(node, "noise", {"path_dephasing_a", "path_dephasing_b", "white_noise", "fit"});
  if (node["fit"]) {
    if (node.size() != 1) fail("noise.fit", "cannot be combined with explicit noise parameters");
    const YAML::Node fit = node["fit"];
    if (fit.IsScalar()) {
      if (fit.Scalar() != "measured") fail("noise.fit", "expected 'measured' or a list of six values");
      config.fit_targets = reference::kWitnessTermValues;
      return;
    }
    if (!fit.IsSequence() || fit.size() != 6) fail("noise.fit", "expected six witness-term values");
    std::array<double, 6> targets{};
    for (std::size_t i = 0; i < 6; ++i) {
      const std::string field = "noise.fit[" + std::to_string(i) + "]";
      targets[i] = get_double(fit[i], field);
      if (targets[i] < -1.0 || targets[i] > 1.0) fail(field, "must lie in [-1, 1]");
    }
    config.fit_targets = targets;
    return;
  }
  photonics::NoiseModel m;
  if (node["path_dephasing_a"]) m.path_dephasing_a = get_unit_interval(node["path_dephasing_a"], "noise.path_dephasing_a");
  if (node["path_dephasing_b"]) m.path_dephasing_b = get_unit_interval(node["path_dephasing_b"], "noise.path_dephasing_b");
  if (node["white_noise"]) m.white_noise = get_unit_interval(node["white_noise"], "noise.white_noise");
  config.noise = m;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML/JSON: ") + e.what());
  }
  ExperimentConfig config;
  if (root.IsNull()) return config;
  reject_unknown(root, "", {"experiment", "source", "noise", "seed", "duration", "rate", "threads", "output", "grover",
                            "gate", "visibility"});

  if (root["experiment"]) {
    config.experiment = get_string(root["experiment"], "experiment");
    if (!kExperiments.contains(config.experiment)) fail("experiment", "unknown experiment '" + config.experiment + "'");
  }
  if (const auto source = root["source"]) {
    reject_unknown(source, "source", {"theta"});
    if (source["theta"]) config.source.theta = get_double(source["theta"], "source.theta");
  }
  if (root["noise"]) parse_noise(root["noise"], config);
  if (root["seed"]) config.seed = get_u64(root["seed"], "seed");
  if (root["duration"]) config.duration = get_positive(root["duration"], "duration");
  if (root["rate"]) config.rate = get_positive(root["rate"], "rate");
  if (root["threads"]) {
    const auto t = get_u64(root["threads"], "threads");
    if (t < 1 || t > 256) fail("threads", "must lie in 1..256");
    config.threads = static_cast<int>(t);
  }
  if (const auto output = root["output"]) {
    reject_unknown(output, "output", {"dir", "prefix"});
    if (output["dir"]) config.output_dir = get_string(output["dir"], "output.dir");
    if (output["prefix"]) config.output_prefix = get_string(output["prefix"], "output.prefix");
  }
  if (const auto grover = root["grover"]) {
    reject_unknown(grover, "grover", {"marked", "feedforward", "trials"});
    if (grover["marked"]) {
      try {
        config.grover.mark = mbqc::GroverMark::parse(get_string(grover["marked"], "grover.marked"));
      } catch (const std::invalid_argument& e) {
        fail("grover.marked", e.what());
      }
    }
    if (grover["feedforward"]) config.grover.feedforward = get_bool(grover["feedforward"], "grover.feedforward");
    if (grover["trials"]) {
      config.grover.trials = get_u64(grover["trials"], "grover.trials");
      if (config.grover.trials > 100'000'000) fail("grover.trials", "at most 1e8 trials");
    }
  }
  if (const auto gate = root["gate"]) {
    reject_unknown(gate, "gate", {"cluster", "alpha", "beta"});
    if (gate["cluster"]) {
      try {
        config.gate.cluster = mbqc::parse_cluster_kind(get_string(gate["cluster"], "gate.cluster"));
      } catch (const std::invalid_argument& e) {
        fail("gate.cluster", e.what());
      }
    }
    if (gate["alpha"]) config.gate.alpha = get_double(gate["alpha"], "gate.alpha");
    if (gate["beta"]) config.gate.beta = get_double(gate["beta"], "gate.beta");
  }
  if (const auto vis = root["visibility"]) {
    reject_unknown(vis, "visibility", {"samples"});
    if (vis["samples"]) {
      const auto s = get_u64(vis["samples"], "visibility.samples");
      if (s < 64 || s > 100'000) fail("visibility.samples", "must lie in 64..100000");
      config.visibility.samples = static_cast<int>(s);
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

ResolvedNoise resolve_noise(const ExperimentConfig& config) {
  if (config.fit_targets) {
    const auto fit = photonics::fit_noise(*config.fit_targets);
    return {fit.model, true, fit.residual};
  }
  return {config.noise.value_or(photonics::NoiseModel{}), false, 0.0};
}

}  // namespace oneway::cli
