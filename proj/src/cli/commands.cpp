#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oneway/analysis.hpp"
#include "oneway/cli.hpp"
#include "oneway/cluster.hpp"
#include "oneway/reference_data.hpp"

namespace oneway::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

bool wants_json(OutputFormat f) { return f != OutputFormat::Csv; }
bool wants_csv(OutputFormat f) { return f != OutputFormat::Json; }

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
  return path;
}

json noise_json(const ResolvedNoise& noise) {
  json j;
  j["path_dephasing_a"] = noise.model.path_dephasing_a;
  j["path_dephasing_b"] = noise.model.path_dephasing_b;
  j["white_noise"] = noise.model.white_noise;
  j["fitted"] = noise.fitted;
  if (noise.fitted) j["fit_residual"] = noise.residual;
  return j;
}

json run_json(const ExperimentConfig& config, const std::string& experiment, const ResolvedNoise& noise) {
  json j;
  j["experiment"] = experiment;
  j["seed"] = config.seed;
  j["duration_s"] = config.duration;
  j["rate_per_s"] = config.rate;
  j["theta_rad"] = config.source.theta;
  j["noise"] = noise_json(noise);
  return j;
}

json report_json(const analysis::WitnessReport& r, bool with_errors) {
  json terms = json::object();
  for (const auto& t : r.terms) {
    json term;
    term["value"] = t.value;
    if (with_errors) term["stderr"] = t.standard_error;
    terms[t.name] = term;
  }
  json j;
  j["terms"] = terms;
  j["w_value"] = r.w_value;
  if (with_errors) j["w_stderr"] = r.w_stderr;
  j["fidelity_lower_bound"] = r.fidelity_lower_bound;
  if (with_errors) j["bound_stderr"] = r.bound_stderr;
  return j;
}

std::string bits_of(std::size_t outcome, int width) {
  std::string s;
  for (int q = 0; q < width; ++q) s += qcore::qubit_bit(outcome, q, width) ? '1' : '0';
  return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<fs::path> cmd_witness(const ExperimentConfig& config, const fs::path& out_dir, OutputFormat format) {
  const ResolvedNoise noise = resolve_noise(config);
  const auto lab = photonics::apply_noise(photonics::source_state(config.source), noise.model);
  const auto analytic = analysis::witness_value(lab);
  const auto records = analysis::simulate_witness_counts(lab, config.rate, config.duration, config.seed);
  const auto counted = analysis::witness_from_counts(records);
  const double bootstrap = analysis::witness_bootstrap_stderr(records, 200, mbqc::derive_seed(config.seed, 1000));

  std::vector<fs::path> written;
  const std::string& pre = config.output_prefix;
  if (wants_json(format)) {
    json j = run_json(config, "witness", noise);
    j["analytic"] = report_json(analytic, false);
    j["counted"] = report_json(counted, true);
    j["counted"]["w_stderr_bootstrap"] = bootstrap;
    j["fidelity_to_c4"] = qcore::fidelity(lab, cluster::c4_state());
    json ref;
    ref["w_value"] = reference::kWitnessValue;
    ref["w_stderr"] = reference::kWitnessError;
    ref["fidelity_lower_bound"] = reference::kFidelityBound;
    j["reference"] = ref;
    written.push_back(write_file(out_dir, pre + "witness.json", dump(j)));
  }
  if (wants_csv(format)) {
    std::ostringstream terms;
    terms << "term,analytic_value,counted_value,counted_stderr,reference_value,reference_stderr\n";
    for (std::size_t t = 0; t < 6; ++t) {
      terms << analytic.terms[t].name << ',' << num(analytic.terms[t].value) << ',' << num(counted.terms[t].value) << ','
            << num(counted.terms[t].standard_error) << ',' << num(reference::kWitnessTermValues[t]) << ','
            << num(reference::kWitnessTermErrors[t]) << '\n';
    }
    written.push_back(write_file(out_dir, pre + "witness_terms.csv", terms.str()));

    std::ostringstream counts;
    counts << "setting,outcome_bits,count\n";
    for (const auto& r : records) {
      for (std::size_t o = 0; o < r.counts.size(); ++o) counts << r.setting << ',' << bits_of(o, 4) << ',' << r.counts[o] << '\n';
    }
    written.push_back(write_file(out_dir, pre + "witness_counts.csv", counts.str()));
  }
  return written;
}

std::vector<fs::path> cmd_grover(const ExperimentConfig& config, const fs::path& out_dir, OutputFormat format) {
  const ResolvedNoise noise = resolve_noise(config);
  const auto& opts = config.grover;
  const auto report = analysis::grover_report(noise.model, opts.feedforward, opts.mark, config.rate, config.duration,
                                              config.seed, config.source.theta);
  std::optional<mbqc::GroverDistribution> sampled;
  if (opts.trials > 0) {
    const auto lab = photonics::apply_noise(photonics::source_state(config.source), noise.model);
    sampled = mbqc::grover_run(opts.mark, opts.feedforward, lab, opts.trials, config.seed, config.threads);
  }

  std::vector<fs::path> written;
  const std::string& pre = config.output_prefix;
  if (wants_json(format)) {
    json j = run_json(config, "grover", noise);
    j["marked"] = opts.mark.to_string();
    j["feedforward"] = opts.feedforward;
    json dist = json::object();
    for (int k = 0; k < 4; ++k) dist[mbqc::GroverMark{k / 2, k % 2}.to_string()] = report.distribution[k];
    j["distribution"] = dist;
    j["success_probability"] = report.success;
    j["success_stderr"] = report.success_stderr;
    if (sampled) {
      json s = json::object();
      for (int k = 0; k < 4; ++k) s[mbqc::GroverMark{k / 2, k % 2}.to_string()] = (*sampled)[k];
      j["sampled"] = {{"trials", opts.trials}, {"distribution", s}};
    }
    j["reference"] = {{"success_feedforward", reference::kGroverSuccessFeedForward},
                      {"success_no_feedforward", reference::kGroverSuccessNoFeedForward}};
    written.push_back(write_file(out_dir, pre + "grover.json", dump(j)));
  }
  if (wants_csv(format)) {
    std::ostringstream csv;
    csv << "readout,probability,count" << (sampled ? ",sampled_probability" : "") << '\n';
    for (int k = 0; k < 4; ++k) {
      csv << mbqc::GroverMark{k / 2, k % 2}.to_string() << ',' << num(report.distribution[k]) << ',' << report.counts[k];
      if (sampled) csv << ',' << num((*sampled)[k]);
      csv << '\n';
    }
    written.push_back(write_file(out_dir, pre + "grover.csv", csv.str()));
  }
  return written;
}

std::vector<fs::path> cmd_gate(const ExperimentConfig& config, const fs::path& out_dir, OutputFormat format) {
  const ResolvedNoise noise = resolve_noise(config);
  const auto& opts = config.gate;
  const auto branches = analysis::gate_fidelity_report(opts.cluster, opts.alpha, opts.beta, noise.model);

  // Measured fidelities exist for the horseshoe at (0, 0) and the box at (pi, 0).
  const std::array<double, 4>* ref = nullptr;
  if (opts.cluster == mbqc::ClusterKind::Horseshoe && opts.alpha == 0.0 && opts.beta == 0.0) {
    ref = &reference::kHorseshoeFidelities;
  } else if (opts.cluster == mbqc::ClusterKind::Box && std::abs(opts.alpha - std::numbers::pi) < 1e-12 && opts.beta == 0.0) {
    ref = &reference::kBoxFidelities;
  }
  double mean = 0.0;
  for (const auto& b : branches) mean += b.fidelity / 4.0;

  std::vector<fs::path> written;
  const std::string& pre = config.output_prefix;
  if (wants_json(format)) {
    json j = run_json(config, "gate", noise);
    j["cluster"] = mbqc::to_string(opts.cluster);
    j["alpha_rad"] = opts.alpha;
    j["beta_rad"] = opts.beta;
    json rows = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
      json row;
      row["s2"] = branches[k].s2;
      row["s3"] = branches[k].s3;
      row["branch_probability"] = branches[k].probability;
      row["fidelity"] = branches[k].fidelity;
      if (ref) row["reference_fidelity"] = (*ref)[k];
      rows.push_back(row);
    }
    j["branches"] = rows;
    j["mean_fidelity"] = mean;
    written.push_back(write_file(out_dir, pre + "gate.json", dump(j)));
  }
  if (wants_csv(format)) {
    std::ostringstream csv;
    csv << "s2,s3,branch_probability,fidelity,reference_fidelity\n";
    for (std::size_t k = 0; k < 4; ++k) {
      csv << branches[k].s2 << ',' << branches[k].s3 << ',' << num(branches[k].probability) << ','
          << num(branches[k].fidelity) << ',' << (ref ? num((*ref)[k]) : "") << '\n';
    }
    written.push_back(write_file(out_dir, pre + "gate.csv", csv.str()));
  }
  return written;
}

std::vector<fs::path> cmd_visibility(const ExperimentConfig& config, const fs::path& out_dir, OutputFormat format) {
  const ResolvedNoise noise = resolve_noise(config);
  const int samples = config.visibility.samples;
  const auto pairs = photonics::all_detector_pairs();
  std::array<std::vector<photonics::FringePoint>, 4> fringes;
  std::array<double, 4> visibilities{};
  for (std::size_t k = 0; k < 4; ++k) {
    fringes[k] = photonics::fringe_scan(noise.model, pairs[k], samples);
    visibilities[k] = photonics::visibility_scan(noise.model, pairs[k], samples);
  }

  std::vector<fs::path> written;
  const std::string& pre = config.output_prefix;
  if (wants_json(format)) {
    json j = run_json(config, "visibility", noise);
    j["samples"] = samples;
    json vis = json::object();
    for (std::size_t k = 0; k < 4; ++k) {
      vis[photonics::to_string(pairs[k])] = {{"visibility", visibilities[k]}, {"reference", reference::kVisibilities[k]}};
    }
    j["visibilities"] = vis;
    written.push_back(write_file(out_dir, pre + "visibility.json", dump(j)));
  }
  if (wants_csv(format)) {
    std::ostringstream fringe;
    fringe << "theta_rad";
    for (auto p : pairs) fringe << ',' << photonics::to_string(p);
    fringe << '\n';
    for (int i = 0; i < samples; ++i) {
      fringe << num(fringes[0][i].theta);
      for (std::size_t k = 0; k < 4; ++k) fringe << ',' << num(fringes[k][i].probability);
      fringe << '\n';
    }
    written.push_back(write_file(out_dir, pre + "fringe.csv", fringe.str()));

    std::ostringstream vis;
    vis << "pair,visibility,reference_visibility\n";
    for (std::size_t k = 0; k < 4; ++k) {
      vis << photonics::to_string(pairs[k]) << ',' << num(visibilities[k]) << ',' << num(reference::kVisibilities[k]) << '\n';
    }
    written.push_back(write_file(out_dir, pre + "visibility.csv", vis.str()));
  }
  return written;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate one-way quantum computing on a two-photon four-qubit cluster state", "oneway"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string format = "both";
  app.add_option("command", command, "witness, grover, gate, visibility, or run (experiment named in the config)")
      ->required()
      ->check(CLI::IsMember({"witness", "grover", "gate", "visibility", "run"}));
  app.add_option("--config", config_path, "experiment config (YAML or JSON)")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  auto* seed_opt = app.add_option("--seed", seed, "root seed (overrides the config)");
  app.add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "oneway: " << e.what() << '\n';
    return 2;
  }

  try {
    ExperimentConfig config = load_config(config_path);
    if (seed_opt->count() > 0) config.seed = seed;
    std::string experiment = command;
    if (command == "run") {
      if (config.experiment.empty()) throw ConfigError("config field 'experiment': required by 'run'");
      experiment = config.experiment;
    } else if (!config.experiment.empty() && config.experiment != command) {
      throw ConfigError("config field 'experiment': '" + config.experiment + "' does not match command '" + command + "'");
    }
    const fs::path dir = out_opt->count() > 0 ? fs::path(out_dir) : fs::path(config.output_dir);
    const OutputFormat fmt = format == "json" ? OutputFormat::Json : format == "csv" ? OutputFormat::Csv : OutputFormat::Both;

    std::vector<fs::path> written;
    if (experiment == "witness") written = cmd_witness(config, dir, fmt);
    else if (experiment == "grover") written = cmd_grover(config, dir, fmt);
    else if (experiment == "gate") written = cmd_gate(config, dir, fmt);
    else written = cmd_visibility(config, dir, fmt);
    for (const auto& p : written) out << p.string() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "oneway: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "oneway: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace oneway::cli
