#pragma once

// Experiment configuration files.
//
// Grammar (one statement per line, '#' starts a comment):
//
//   [section]            section header: detector, system, coupling,
//                        observable, bias, budget, interaction
//   key = expression     numeric value; keys may be dotted (qpc1.T)
//
// Expressions accept decimal literals, the constant `pi`, + - * /,
// unary minus and parentheses, e.g. `3*pi/4` or `(1 + 0.6)/2`.
//
// [detector] / [system]:  qpc1.T | qpc1.theta, qpc1.chi, qpc1.xi,
//                         qpc2.T | qpc2.theta, qpc2.chi, qpc2.xi, phi
// [coupling]:             gamma (required), sigma, pair_probability
// [observable]:           a0, a3
// [bias]:                 voltage, fermi_energy_ev, temperature
// [budget]:               tau_m, path_length, fermi_velocity, target_rms
// [interaction]:          length, separation, screening_length, speed,
//                         coulomb_constant | relative_permittivity

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "cmzi/interaction.hpp"
#include "cmzi/params.hpp"
#include "cmzi/scattering.hpp"
#include "cmzi/stochastic.hpp"

namespace cmzi {

struct ExperimentConfig {
  InterferometerConfig detector;
  InterferometerConfig system;
  CouplingModel coupling;
  std::optional<PhysicalBias> bias;
  ObservableCoefficients observable;
  ObservationBudget budget;
  std::optional<InteractionGeometry> interaction;
};

/// Evaluates a pi-arithmetic expression. Throws ConfigError with `where`.
double evaluate_expression(std::string_view text, const std::string& where = "expression");

/// Parses configuration text. Syntax errors carry "line N"; invariant
/// violations carry the field path (e.g. "detector.qpc1.T").
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a configuration file.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const ExperimentConfig& config);

}  // namespace cmzi
