#include "cmzi/scan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "cmzi/conditioning.hpp"
#include "cmzi/errors.hpp"
#include "cmzi/measurement.hpp"
#include "cmzi/scattering.hpp"
#include "cmzi/stochastic.hpp"

namespace cmzi {

namespace {

const std::array<std::string_view, 5> kParameters = {"gamma", "phi_d", "phi_s", "delta_s1", "sigma"};

/// Per-point cache of the derived statistics.
struct Point {
  const ExperimentConfig& config;
  JointStatistics stats;
  DetectorParams detector;

  explicit Point(const ExperimentConfig& c)
      : config(c),
        stats(averaged_joint_statistics(c.detector, c.system, c.coupling)),
        detector(averaged_detector_params(detector_params(c.detector, c.coupling.gamma()), c.coupling)) {}

  ContextualValues cv() const { return contextual_values(config.observable, detector); }
};

using Evaluator = std::function<double(const Point&)>;

constexpr DetectorDrain kD[] = {DetectorDrain::D1, DetectorDrain::D2};
constexpr SystemDrain kS[] = {SystemDrain::S1, SystemDrain::S2};

const std::vector<std::pair<std::string, Evaluator>>& evaluators() {
  static const auto table = [] {
    std::vector<std::pair<std::string, Evaluator>> t;
    for (auto d : kD) t.emplace_back(fmt::format("P_{}", name(d)), [d](const Point& p) { return p.stats.detector(d); });
    for (auto s : kS) t.emplace_back(fmt::format("P_{}", name(s)), [s](const Point& p) { return p.stats.system(s); });
    for (auto d : kD) {
      for (auto s : kS) {
        t.emplace_back(fmt::format("P_{}{}", name(d), name(s)), [d, s](const Point& p) { return p.stats.joint(d, s); });
      }
    }
    for (auto s : kS) {
      for (auto d : kD) {
        t.emplace_back(fmt::format("P_{}|{}", name(d), name(s)), [d, s](const Point& p) {
          return detector_given_system(p.stats, s)[static_cast<std::size_t>(d)];
        });
      }
    }
    for (auto d : kD) {
      for (auto s : kS) {
        t.emplace_back(fmt::format("P_{}|{}", name(s), name(d)), [d, s](const Point& p) {
          return system_given_detector(p.stats, d)[static_cast<std::size_t>(s)];
        });
      }
    }
    t.emplace_back("alpha_D1", [](const Point& p) { return p.cv().alpha_d1; });
    t.emplace_back("alpha_D2", [](const Point& p) { return p.cv().alpha_d2; });
    for (auto s : kS) {
      t.emplace_back(fmt::format("cond_avg_{}", name(s)),
                     [s](const Point& p) { return conditioned_average(p.stats, p.cv(), s); });
    }
    t.emplace_back("concurrence", [](const Point& p) {
      return concurrence(p.config.detector.qpc1, p.config.system.qpc1, p.config.coupling.gamma());
    });
    t.emplace_back("eta", [](const Point& p) { return damping_eta(p.config.coupling.sigma()); });
    for (auto d : kD) {
      for (auto s : kS) {
        t.emplace_back(fmt::format("S_{}{}", name(d), name(s)),
                       [d, s](const Point& p) { return cross_noise_power(p.stats, d, s, *p.config.bias); });
      }
    }
    return t;
  }();
  return table;
}

const Evaluator& evaluator(std::string_view q) {
  for (const auto& [name, fn] : evaluators()) {
    if (name == q) return fn;
  }
  throw ConfigError("--quantities", fmt::format("unknown quantity '{}'", q));
}

bool is_noise(std::string_view q) { return q.starts_with("S_"); }

}  // namespace

double GridSpec::value(std::size_t i) const {
  if (i + 1 == count) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

const std::vector<std::string>& quantity_vocabulary() {
  static const auto names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : evaluators()) v.push_back(name);
    return v;
  }();
  return names;
}

GridSpec parse_sweep(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 4) throw ConfigError("--sweep", fmt::format("expected NAME:MIN:MAX:COUNT, got '{}'", text));
  GridSpec g;
  g.parameter = std::string(parts[0]);
  g.min = evaluate_expression(parts[1], "--sweep");
  g.max = evaluate_expression(parts[2], "--sweep");
  const double count = evaluate_expression(parts[3], "--sweep");
  if (!(count >= 2.0) || count != std::floor(count) || count > 1e8) {
    throw ConfigError("--sweep", fmt::format("grid count must be an integer >= 2, got '{}'", parts[3]));
  }
  g.count = static_cast<std::size_t>(count);
  return g;
}

std::vector<std::string> parse_quantities(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      std::string q(text.substr(start, i - start));
      std::erase_if(q, [](char c) { return c == ' '; });
      if (!q.empty()) {
        evaluator(q);
        out.push_back(std::move(q));
      }
      start = i + 1;
    }
  }
  if (out.empty()) throw ConfigError("--quantities", "no quantities requested");
  return out;
}

void validate(const ScanSpec& spec) {
  if (std::find(kParameters.begin(), kParameters.end(), spec.grid.parameter) == kParameters.end()) {
    throw ConfigError("--sweep", fmt::format("unknown sweep parameter '{}' (expected gamma, phi_d, phi_s, "
                                             "delta_s1 or sigma)", spec.grid.parameter));
  }
  if (spec.grid.count < 2) throw ConfigError("--sweep", "grid count must be at least 2");
  if (!(spec.grid.min < spec.grid.max)) throw ConfigError("--sweep", "grid needs min < max");
  if (spec.outputs.empty()) throw ConfigError("--quantities", "no quantities requested");
  for (const auto& q : spec.outputs) {
    evaluator(q);
    if (is_noise(q) && !spec.fixed.bias) {
      throw ConfigError("bias", fmt::format("quantity '{}' needs a [bias] section", q));
    }
  }
  // Both grid ends must produce a valid configuration.
  with_parameter(spec.fixed, spec.grid.parameter, spec.grid.min);
  with_parameter(spec.fixed, spec.grid.parameter, spec.grid.max);
}

ExperimentConfig with_parameter(const ExperimentConfig& config, std::string_view parameter, double value) {
  ExperimentConfig c = config;
  const std::string path = fmt::format("--sweep {}", parameter);
  try {
    const CouplingModel& m = config.coupling;
    if (parameter == "gamma") {
      c.coupling = CouplingModel(value, m.sigma(), m.pair_probability());
    } else if (parameter == "sigma") {
      c.coupling = CouplingModel(m.gamma(), value, m.pair_probability());
    } else if (parameter == "phi_d") {
      c.detector.phi = value;
    } else if (parameter == "phi_s") {
      c.system.phi = value;
    } else if (parameter == "delta_s1") {
      if (!(value >= -1.0 && value <= 1.0)) throw DomainError(fmt::format("path bias {} outside [-1, 1]", value));
      const QpcSetting& q = config.system.qpc1;
      c.system.qpc1 = QpcSetting::from_transmission(0.5 * (1.0 + value), q.chi(), q.xi());
    } else {
      throw ConfigError("--sweep", fmt::format("unknown sweep parameter '{}'", parameter));
    }
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  return c;
}

std::vector<Cell> evaluate_quantities(const ExperimentConfig& config, const std::vector<std::string>& outputs) {
  const Point point(config);
  std::vector<Cell> cells;
  cells.reserve(outputs.size());
  for (const auto& q : outputs) {
    try {
      cells.emplace_back(evaluator(q)(point));
    } catch (const AmbiguousMeasurement&) {
      cells.emplace_back(Sentinel::Ambiguous);
    } catch (const PostSelectionImpossible&) {
      cells.emplace_back(Sentinel::PostSelection);
    }
  }
  return cells;
}

std::vector<ScanRow> run_scan(const ScanSpec& spec, unsigned workers) {
  validate(spec);
  const std::size_t n = spec.grid.count;
  std::vector<ScanRow> rows(n);
  std::vector<std::exception_ptr> errors(n);

  auto run_row = [&](std::size_t i) {
    try {
      const double v = spec.grid.value(i);
      rows[i] = {v, evaluate_quantities(with_parameter(spec.fixed, spec.grid.parameter, v), spec.outputs)};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) run_row(i);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::string format_cell(const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) {
    if (!std::isfinite(*v)) return std::string(kAmbiguousToken);
    return format_number(*v);
  }
  return std::string(std::get<Sentinel>(cell) == Sentinel::Ambiguous ? kAmbiguousToken : kPostSelectionToken);
}

std::string to_csv(const ScanSpec& spec, const std::vector<ScanRow>& rows) {
  std::string out = spec.grid.parameter;
  for (const auto& q : spec.outputs) out += "," + q;
  out += '\n';
  for (const auto& row : rows) {
    out += format_number(row.swept);
    for (const auto& cell : row.cells) out += "," + format_cell(cell);
    out += '\n';
  }
  return out;
}

}  // namespace cmzi
