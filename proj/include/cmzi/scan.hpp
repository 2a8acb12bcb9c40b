#pragma once

// Parameter sweeps over an experiment configuration, emitted as CSV.

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmzi/config.hpp"

namespace cmzi {

/// Sentinel written for divergent contextual values.
inline constexpr std::string_view kAmbiguousToken = "inf-ambiguous";
/// Sentinel written when conditioning on a drain with zero marginal.
inline constexpr std::string_view kPostSelectionToken = "undefined-postselection";

struct GridSpec {
  std::string parameter;  ///< gamma, phi_d, phi_s, delta_s1 or sigma
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;

  double value(std::size_t i) const;
};

struct ScanSpec {
  GridSpec grid;
  ExperimentConfig fixed;
  std::vector<std::string> outputs;
};

/// Names accepted by --quantities, in canonical order.
const std::vector<std::string>& quantity_vocabulary();

/// Parses NAME:MIN:MAX:COUNT; MIN and MAX accept pi arithmetic.
/// Throws ConfigError.
GridSpec parse_sweep(std::string_view text);

/// Splits a comma-separated quantity list and checks every name.
std::vector<std::string> parse_quantities(std::string_view text);

/// Throws ConfigError on an unknown parameter or quantity, count < 2,
/// min >= max, or noise quantities without a [bias] section.
void validate(const ScanSpec& spec);

/// Applies one swept value to a copy of the configuration.
ExperimentConfig with_parameter(const ExperimentConfig& config, std::string_view parameter, double value);

enum class Sentinel { Ambiguous, PostSelection };
using Cell = std::variant<double, Sentinel>;

struct ScanRow {
  double swept = 0.0;
  std::vector<Cell> cells;
};

/// Evaluates every grid point (concurrently) and returns rows in grid order.
std::vector<ScanRow> run_scan(const ScanSpec& spec, unsigned workers = 0);

/// Evaluates the requested quantities at one configuration.
std::vector<Cell> evaluate_quantities(const ExperimentConfig& config,
                                      const std::vector<std::string>& outputs);

/// Shortest-exact text of a double (17 significant digits).
std::string format_number(double v);
std::string format_cell(const Cell& cell);

/// Header plus one line per row.
std::string to_csv(const ScanSpec& spec, const std::vector<ScanRow>& rows);

}  // namespace cmzi
