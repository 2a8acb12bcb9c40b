// cmzi: parameter scans, Monte Carlo runs and diagnostics for the coupled
// electronic Mach-Zehnder interferometers.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "cmzi/conditioning.hpp"
#include "cmzi/constants.hpp"
#include "cmzi/config.hpp"
#include "cmzi/errors.hpp"
#include "cmzi/interaction.hpp"
#include "cmzi/measurement.hpp"
#include "cmzi/scan.hpp"
#include "cmzi/stochastic.hpp"

namespace {

using namespace cmzi;

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kAmbiguous = 3, kPostSelection = 4 };

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("--out", fmt::format("cannot open '{}' for writing", path));
  out << text;
}

std::string cv_cell(const ContextualValues& cv, DetectorDrain d) { return format_number(cv[d]); }

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t n = 10000;
  std::string sweep;
  std::string quantities;
  std::string format = "csv";
  std::optional<double> target_rms;
  bool sample_coupling = false;
  std::string drain = "D1";
  std::size_t count = 72;
  bool summary = false;
  std::optional<double> length, separation, screening, speed, permittivity, coulomb, target_gamma;
  double fermi_energy_ev = 0.01;
  unsigned workers = 0;
};

int run_scan_command(const Options& o) {
  ScanSpec spec;
  spec.fixed = load_config(o.config);
  spec.grid = parse_sweep(o.sweep);
  spec.outputs = parse_quantities(o.quantities);
  write_output(o.out, to_csv(spec, run_scan(spec, o.workers)));
  return kOk;
}

int run_montecarlo_command(const Options& o) {
  const ExperimentConfig c = load_config(o.config);
  if (o.n == 0) throw ConfigError("--n", "event count must be at least 1");
  ObservationBudget budget = c.budget;
  if (o.target_rms) {
    if (!(*o.target_rms > 0.0)) throw ConfigError("--target-rms", "must be positive");
    budget.target_rms = *o.target_rms;
  }

  const JointStatistics stats = averaged_joint_statistics(c.detector, c.system, c.coupling);
  const DetectorParams dp = averaged_detector_params(detector_params(c.detector, c.coupling.gamma()), c.coupling);
  const ContextualValues cv = contextual_values(c.observable, dp);
  const std::array<double, 2> p = {stats.detector(DetectorDrain::D1), stats.detector(DetectorDrain::D2)};

  const auto events = o.sample_coupling
                          ? sample_events_fluctuating(c.detector, c.system, c.coupling, o.n, o.seed)
                          : sample_events(stats, o.n, o.seed, o.workers);
  const EstimateReport r = contextual_estimate(events, cv, p, o.seed);
  const double exact = reconstruct_average(cv, p[0], p[1]);
  const double norm2 = cv.alpha_d1 * cv.alpha_d1 + cv.alpha_d2 * cv.alpha_d2;
  const double events_needed = norm2 / (budget.target_rms * budget.target_rms);
  const double time_needed = observation_time(cv, budget);

  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["n"] = r.n;
    j["estimate"] = r.estimate;
    j["exact"] = exact;
    j["empirical_variance"] = r.empirical_variance;
    j["predicted_mse"] = r.predicted_mse;
    j["mse_upper_bound"] = r.mse_upper_bound;
    j["alpha_D1"] = cv.alpha_d1;
    j["alpha_D2"] = cv.alpha_d2;
    j["target_rms"] = budget.target_rms;
    j["observation_events"] = events_needed;
    j["observation_time"] = time_needed;
    j["sampling"] = o.sample_coupling ? "per-event-coupling" : "averaged";
    j["rng_algorithm"] = r.rng_algorithm;
    write_output(o.out, j.dump(2) + "\n");
    return kOk;
  }
  std::string text =
      "seed,n,estimate,exact,empirical_variance,predicted_mse,mse_upper_bound,alpha_D1,alpha_D2,"
      "target_rms,observation_events,observation_time,sampling,rng_algorithm\n";
  text += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.seed, r.n, format_number(r.estimate),
                      format_number(exact), format_number(r.empirical_variance), format_number(r.predicted_mse),
                      format_number(r.mse_upper_bound), format_number(cv.alpha_d1), format_number(cv.alpha_d2),
                      format_number(budget.target_rms), format_number(events_needed), format_number(time_needed),
                      o.sample_coupling ? "per-event-coupling" : "averaged", r.rng_algorithm);
  write_output(o.out, text);
  return kOk;
}

int run_povm_command(const Options& o) {
  const ExperimentConfig c = load_config(o.config);
  const PovmPair povm = averaged_povm(c.detector, c.coupling);
  std::optional<ContextualValues> cv;
  try {
    cv = contextual_values(c.observable,
                           averaged_detector_params(detector_params(c.detector, c.coupling.gamma()), c.coupling));
  } catch (const AmbiguousMeasurement&) {
  }
  std::string text = "drain,E_L,E_U,alpha\n";
  for (auto d : {DetectorDrain::D1, DetectorDrain::D2}) {
    const Mat2& e = povm[d].matrix();
    text += fmt::format("{},{},{},{}\n", name(d), format_number(e(0, 0).real()), format_number(e(1, 1).real()),
                        cv ? cv_cell(*cv, d) : std::string(kAmbiguousToken));
  }
  write_output(o.out, text);
  return cv ? kOk : kAmbiguous;
}

int run_erasure_command(const Options& o) {
  const ExperimentConfig c = load_config(o.config);
  if (o.drain != "D1" && o.drain != "D2") throw ConfigError("--drain", "expected D1 or D2");
  if (o.count < 3) throw ConfigError("--count", "need at least 3 points");
  const DetectorDrain drain = o.drain == "D1" ? DetectorDrain::D1 : DetectorDrain::D2;
  std::vector<double> phases(o.count);
  for (std::size_t i = 0; i < o.count; ++i) {
    phases[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(o.count);
  }
  const auto curve = erasure_curve(c.detector, c.system, phases, c.coupling.gamma(), drain);
  if (o.summary) {
    std::vector<double> y;
    for (const auto& pt : curve) y.push_back(pt.conditional);
    const FringeFit fit = fit_fringe(phases, y);
    write_output(o.out, fmt::format("drain,offset,visibility,phase\n{},{},{},{}\n", o.drain,
                                    format_number(fit.offset), format_number(fit.visibility()),
                                    format_number(fit.phase())));
    return kOk;
  }
  std::string text = fmt::format("phi_s,P_S1|{},P_S1\n", o.drain);
  for (const auto& pt : curve) {
    text += fmt::format("{},{},{}\n", format_number(pt.phi_s), format_number(pt.conditional),
                        format_number(pt.unconditioned));
  }
  write_output(o.out, text);
  return kOk;
}

int run_interaction_command(const Options& o) {
  InteractionGeometry g;
  if (!o.config.empty()) {
    const ExperimentConfig c = load_config(o.config);
    if (c.interaction) g = *c.interaction;
  }
  if (o.length) g.length = *o.length;
  if (o.separation) g.separation = *o.separation;
  if (o.screening) g.screening_length = *o.screening;
  if (o.speed) g.speed = *o.speed;
  if (o.permittivity && o.coulomb) {
    throw ConfigError("--permittivity", "give at most one of --permittivity and --coulomb-constant");
  }
  try {
    if (o.permittivity) g.coulomb_constant = coulomb_constant(*o.permittivity);
    if (o.coulomb) g.coulomb_constant = *o.coulomb;
    g.validate();
    if (o.target_gamma) g = with_target_coupling(g, *o.target_gamma);
  } catch (const DomainError& e) {
    throw ConfigError("interaction", e.what());
  }

  std::vector<double> lengths = {g.length};
  if (!o.sweep.empty()) {
    const GridSpec grid = parse_sweep(o.sweep);
    if (grid.parameter != "length") throw ConfigError("--sweep", "interaction-phase sweeps only 'length'");
    if (!(grid.min >= 0.0 && grid.min < grid.max)) throw ConfigError("--sweep", "need 0 <= min < max");
    lengths.clear();
    for (std::size_t i = 0; i < grid.count; ++i) lengths.push_back(grid.value(i));
  }
  const double fermi_energy = o.fermi_energy_ev * constants::elementary_charge;
  std::string text =
      "length,separation,screening_length,speed,coulomb_constant,gamma,dynamical_phase,joint_dynamical_phase\n";
  for (double length : lengths) {
    InteractionGeometry at = g;
    at.length = length;
    const double dyn = dynamical_phase(fermi_energy, length, at.speed);
    text += fmt::format("{},{},{},{},{},{},{},{}\n", format_number(length), format_number(at.separation),
                        format_number(at.screening_length), format_number(at.speed),
                        format_number(at.coulomb_constant), format_number(coupling_phase(at)),
                        format_number(dyn), format_number(2.0 * dyn));
  }
  write_output(o.out, text);
  return kOk;
}

int run_validate_command(const Options& o) {
  write_output(o.out, format_config(load_config(o.config)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Mach-Zehnder interferometer toolkit", "cmzi"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", o.config, "Configuration file")->check(CLI::ExistingFile);
    if (config_required) opt->required();
    sub->add_option("--out", o.out, "Output file (default: standard output)");
  };

  auto* scan = app.add_subcommand("scan", "Sweep one parameter and emit CSV");
  add_common(scan, true);
  scan->add_option("--sweep", o.sweep, "NAME:MIN:MAX:COUNT, NAME in gamma, phi_d, phi_s, delta_s1, sigma")
      ->required();
  scan->add_option("--quantities", o.quantities,
                   fmt::format("Comma-separated quantity names: {}", fmt::join(quantity_vocabulary(), ", ")))
      ->required();
  scan->add_option("--workers", o.workers, "Worker threads (0 = all cores)");

  auto* mc = app.add_subcommand("montecarlo", "Sample drain events and estimate the which-path average");
  add_common(mc, true);
  mc->add_option("--seed", o.seed, "Master seed");
  mc->add_option("--n", o.n, "Number of events");
  mc->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  mc->add_option("--target-rms", o.target_rms, "Target RMS error for the observation budget");
  mc->add_flag("--sample-coupling", o.sample_coupling, "Draw the coupling phase per event");
  mc->add_option("--workers", o.workers, "Worker threads (0 = all cores)");

  auto* povm = app.add_subcommand("povm", "Probability operators and contextual values");
  add_common(povm, true);

  auto* erasure = app.add_subcommand("erasure", "Conditioned system fringe over the system tuning phase");
  add_common(erasure, true);
  erasure->add_option("--drain", o.drain, "Detector drain to condition on (D1 or D2)");
  erasure->add_option("--count", o.count, "Points over one period");
  erasure->add_flag("--summary", o.summary, "Emit the fitted fringe instead of the curve");

  auto* inter = app.add_subcommand("interaction-phase", "Coupling phase from the interaction geometry");
  add_common(inter, false);
  inter->add_option("--length", o.length, "Co-propagation length L [m]");
  inter->add_option("--separation", o.separation, "Channel separation d [m]");
  inter->add_option("--screening-length", o.screening, "Screening length [m]");
  inter->add_option("--speed", o.speed, "Propagation speed [m/s]");
  inter->add_option("--permittivity", o.permittivity, "Relative permittivity");
  inter->add_option("--coulomb-constant", o.coulomb, "Interaction constant [J m / C^2]");
  inter->add_option("--target-gamma", o.target_gamma, "Solve the interaction constant for this phase");
  inter->add_option("--fermi-energy-ev", o.fermi_energy_ev, "Fermi energy for the dynamical phase [eV]");
  inter->add_option("--sweep", o.sweep, "length:MIN:MAX:COUNT");

  auto* validate_cmd = app.add_subcommand("validate-config", "Check a configuration and print it normalized");
  add_common(validate_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*scan) return run_scan_command(o);
    if (*mc) return run_montecarlo_command(o);
    if (*povm) return run_povm_command(o);
    if (*erasure) return run_erasure_command(o);
    if (*inter) return run_interaction_command(o);
    if (*validate_cmd) return run_validate_command(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const AmbiguousMeasurement& e) {
    std::cerr << "ambiguous measurement: " << e.what() << '\n';
    return kAmbiguous;
  } catch (const PostSelectionImpossible& e) {
    std::cerr << "post-selection impossible: " << e.what() << '\n';
    return kPostSelection;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
