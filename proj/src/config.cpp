#include "cmzi/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cmzi/errors.hpp"

namespace cmzi {

namespace {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const std::string& where) : text_(text), where_(where) {}

  double parse() {
    const double v = sum();
    skip_space();
    if (pos_ != text_.size()) fail(fmt::format("unexpected '{}'", text_.substr(pos_)));
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(where_, fmt::format("bad expression '{}': {}", text_, what));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = product();
    for (;;) {
      if (accept('+')) {
        v += product();
      } else if (accept('-')) {
        v -= product();
      } else {
        return v;
      }
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        const double d = unary();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  double primary() {
    skip_space();
    if (accept('(')) {
      const double v = sum();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return std::numbers::pi;
    }
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) {
      fail(pos_ < text_.size() ? fmt::format("unexpected '{}'", text_.substr(pos_)) : "unexpected end");
    }
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  std::string_view text_;
  const std::string& where_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

const std::map<std::string, std::set<std::string>, std::less<>>& schema() {
  static const std::set<std::string> interferometer = {
      "qpc1.T", "qpc1.theta", "qpc1.chi", "qpc1.xi", "qpc2.T", "qpc2.theta", "qpc2.chi", "qpc2.xi", "phi"};
  static const std::map<std::string, std::set<std::string>, std::less<>> s = {
      {"detector", interferometer},
      {"system", interferometer},
      {"coupling", {"gamma", "sigma", "pair_probability"}},
      {"observable", {"a0", "a3"}},
      {"bias", {"voltage", "fermi_energy_ev", "temperature"}},
      {"budget", {"tau_m", "path_length", "fermi_velocity", "target_rms"}},
      {"interaction",
       {"length", "separation", "screening_length", "speed", "coulomb_constant", "relative_permittivity"}},
  };
  return s;
}

/// Fully qualified key -> value.
using Table = std::map<std::string, double, std::less<>>;

class Fields {
 public:
  explicit Fields(const Table& t) : table_(t) {}

  bool has(const std::string& key) const { return table_.contains(key); }

  double get(const std::string& key, double fallback) const {
    auto it = table_.find(key);
    return it == table_.end() ? fallback : it->second;
  }

  double require(const std::string& key) const {
    auto it = table_.find(key);
    if (it == table_.end()) throw ConfigError(key, "required field is missing");
    return it->second;
  }

  bool any_in(std::string_view section) const {
    auto it = table_.lower_bound(fmt::format("{}.", section));
    return it != table_.end() && it->first.starts_with(fmt::format("{}.", section));
  }

 private:
  const Table& table_;
};

/// Runs `make`, re-throwing domain errors as ConfigError at `path`.
template <typename F>
auto at_path(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

QpcSetting read_qpc(const Fields& f, const std::string& prefix) {
  const bool has_t = f.has(prefix + ".T");
  const bool has_theta = f.has(prefix + ".theta");
  if (has_t == has_theta) {
    throw ConfigError(prefix, has_t ? "give exactly one of T and theta, not both"
                                    : "one of T or theta is required");
  }
  const double chi = f.get(prefix + ".chi", 0.0);
  const double xi = f.get(prefix + ".xi", 0.0);
  if (has_t) {
    const std::string key = prefix + ".T";
    return at_path(key, [&] { return QpcSetting::from_transmission(f.require(key), chi, xi); });
  }
  const std::string key = prefix + ".theta";
  return at_path(key, [&] { return QpcSetting::from_balance_angle(f.require(key), chi, xi); });
}

InterferometerConfig read_interferometer(const Fields& f, const std::string& section) {
  return {read_qpc(f, section + ".qpc1"), read_qpc(f, section + ".qpc2"), f.get(section + ".phi", 0.0)};
}

void require_positive(const std::string& key, double value) {
  if (!(value > 0.0)) throw ConfigError(key, fmt::format("must be positive, got {}", value));
}

}  // namespace

double evaluate_expression(std::string_view text, const std::string& where) {
  return ExpressionParser(trim(text), where).parse();
}

ExperimentConfig parse_config(std::string_view text) {
  Table table;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string where = fmt::format("line {}", line_no);
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().contains(section)) throw ConfigError(where, fmt::format("unknown section [{}]", section));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where, "empty key");
    if (value.empty()) throw ConfigError(where, fmt::format("missing value for '{}'", key));
    std::string sec = section;
    if (sec.empty()) {
      // Fully dotted keys are allowed before the first header.
      const auto dot = key.find('.');
      if (dot == std::string::npos) throw ConfigError(where, fmt::format("key '{}' outside a section", key));
      sec = key.substr(0, dot);
      key = key.substr(dot + 1);
      if (!schema().contains(sec)) throw ConfigError(where, fmt::format("unknown section '{}'", sec));
    }
    const std::string full = fmt::format("{}.{}", sec, key);
    if (!schema().find(sec)->second.contains(key)) {
      throw ConfigError(where, fmt::format("unknown key '{}'", full));
    }
    if (!table.emplace(full, evaluate_expression(value, where)).second) {
      throw ConfigError(where, fmt::format("duplicate key '{}'", full));
    }
  }

  const Fields f(table);
  ExperimentConfig c;
  c.detector = read_interferometer(f, "detector");
  c.system = read_interferometer(f, "system");

  const double gamma = f.require("coupling.gamma");
  const double sigma = f.get("coupling.sigma", 0.0);
  const double pp = f.get("coupling.pair_probability", 1.0);
  at_path("coupling.gamma", [&] { return CouplingModel(gamma); });
  at_path("coupling.sigma", [&] { return CouplingModel(gamma, sigma); });
  c.coupling = at_path("coupling.pair_probability", [&] { return CouplingModel(gamma, sigma, pp); });

  c.observable = {f.get("observable.a0", 0.0), f.get("observable.a3", 1.0)};

  if (f.any_in("bias")) {
    PhysicalBias b;
    b.voltage = f.get("bias.voltage", b.voltage);
    b.fermi_energy_ev = f.get("bias.fermi_energy_ev", b.fermi_energy_ev);
    b.temperature = f.get("bias.temperature", b.temperature);
    require_positive("bias.voltage", b.voltage);
    require_positive("bias.fermi_energy_ev", b.fermi_energy_ev);
    if (!(b.temperature >= 0.0)) throw ConfigError("bias.temperature", "must be non-negative");
    c.bias = b;
  }

  if (f.has("budget.tau_m")) {
    c.budget.tau_m = f.require("budget.tau_m");
    require_positive("budget.tau_m", *c.budget.tau_m);
  }
  c.budget.path_length = f.get("budget.path_length", c.budget.path_length);
  c.budget.fermi_velocity = f.get("budget.fermi_velocity", c.budget.fermi_velocity);
  c.budget.target_rms = f.get("budget.target_rms", c.budget.target_rms);
  require_positive("budget.path_length", c.budget.path_length);
  require_positive("budget.fermi_velocity", c.budget.fermi_velocity);
  require_positive("budget.target_rms", c.budget.target_rms);

  if (f.any_in("interaction")) {
    if (f.has("interaction.coulomb_constant") && f.has("interaction.relative_permittivity")) {
      throw ConfigError("interaction", "give at most one of coulomb_constant and relative_permittivity");
    }
    InteractionGeometry g;
    g.length = f.get("interaction.length", g.length);
    g.separation = f.get("interaction.separation", g.separation);
    g.screening_length = f.get("interaction.screening_length", g.screening_length);
    g.speed = f.get("interaction.speed", g.speed);
    if (f.has("interaction.relative_permittivity")) {
      g.coulomb_constant = at_path("interaction.relative_permittivity", [&] {
        return coulomb_constant(f.require("interaction.relative_permittivity"));
      });
    } else {
      g.coulomb_constant = f.get("interaction.coulomb_constant", g.coulomb_constant);
    }
    at_path("interaction", [&] {
      g.validate();
      return 0;
    });
    c.interaction = g;
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open configuration file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_config(const ExperimentConfig& c) {
  std::string out;
  auto emit = [&](const InterferometerConfig& cfg, std::string_view section) {
    out += fmt::format("[{}]\n", section);
    for (int k = 1; k <= 2; ++k) {
      const QpcSetting& q = k == 1 ? cfg.qpc1 : cfg.qpc2;
      out += fmt::format("qpc{}.T = {:.17g}\nqpc{}.chi = {:.17g}\nqpc{}.xi = {:.17g}\n", k, q.transmission(),
                         k, q.chi(), k, q.xi());
    }
    out += fmt::format("phi = {:.17g}\n\n", cfg.phi);
  };
  emit(c.detector, "detector");
  emit(c.system, "system");
  out += fmt::format("[coupling]\ngamma = {:.17g}\nsigma = {:.17g}\npair_probability = {:.17g}\n\n",
                     c.coupling.gamma(), c.coupling.sigma(), c.coupling.pair_probability());
  out += fmt::format("[observable]\na0 = {:.17g}\na3 = {:.17g}\n\n", c.observable.a0, c.observable.a3);
  if (c.bias) {
    out += fmt::format("[bias]\nvoltage = {:.17g}\nfermi_energy_ev = {:.17g}\ntemperature = {:.17g}\n\n",
                       c.bias->voltage, c.bias->fermi_energy_ev, c.bias->temperature);
  }
  out += "[budget]\n";
  if (c.budget.tau_m) out += fmt::format("tau_m = {:.17g}\n", *c.budget.tau_m);
  out += fmt::format("path_length = {:.17g}\nfermi_velocity = {:.17g}\ntarget_rms = {:.17g}\n",
                     c.budget.path_length, c.budget.fermi_velocity, c.budget.target_rms);
  if (c.interaction) {
    const auto& g = *c.interaction;
    out += fmt::format(
        "\n[interaction]\nlength = {:.17g}\nseparation = {:.17g}\nscreening_length = {:.17g}\n"
        "speed = {:.17g}\ncoulomb_constant = {:.17g}\n",
        g.length, g.separation, g.screening_length, g.speed, g.coulomb_constant);
  }
  return out;
}

}  // namespace cmzi
