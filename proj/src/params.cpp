#include "cmzi/params.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cmzi/errors.hpp"

namespace cmzi {

using std::numbers::pi;

std::string_view name(DetectorDrain d) { return d == DetectorDrain::D1 ? "D1" : "D2"; }
std::string_view name(SystemDrain s) { return s == SystemDrain::S1 ? "S1" : "S2"; }

QpcSetting::QpcSetting() : QpcSetting(0.5, pi / 4, 0.0, 0.0) {}

QpcSetting::QpcSetting(double T, double theta, double chi, double xi)
    : T_(T),
      R_(1.0 - T),
      delta_(T - (1.0 - T)),
      epsilon_(2.0 * std::sqrt(T * (1.0 - T))),
      theta_(theta),
      chi_(chi),
      xi_(xi) {}

QpcSetting QpcSetting::from_transmission(double transmission, double chi, double xi) {
  if (!(transmission >= 0.0 && transmission <= 1.0)) {
    throw DomainError(fmt::format("transmission {} outside [0, 1]", transmission));
  }
  return QpcSetting(transmission, std::acos(std::sqrt(transmission)), chi, xi);
}

QpcSetting QpcSetting::from_balance_angle(double theta, double chi, double xi) {
  if (!(theta >= 0.0 && theta <= pi / 2)) {
    throw DomainError(fmt::format("balance angle {} outside [0, pi/2]", theta));
  }
  const double c = std::cos(theta);
  return QpcSetting(c * c, theta, chi, xi);
}

double QpcSetting::t() const { return std::sqrt(T_); }

std::complex<double> QpcSetting::r() const { return {0.0, std::sqrt(R_)}; }

QpcSetting qpc_from_transmission(double transmission, double chi, double xi) {
  return QpcSetting::from_transmission(transmission, chi, xi);
}

CouplingModel::CouplingModel(double gamma, double sigma, double pair_probability)
    : gamma_(gamma), sigma_(sigma), pair_probability_(pair_probability) {
  if (!(gamma >= 0.0 && gamma <= 2 * pi + 1e-12)) {
    throw DomainError(fmt::format("coupling phase {} outside [0, 2 pi]", gamma));
  }
  if (!(sigma >= 0.0 && sigma <= pi)) {
    throw DomainError(fmt::format("fluctuation half-width {} outside [0, pi]", sigma));
  }
  if (!(pair_probability >= 0.0 && pair_probability <= 1.0)) {
    throw DomainError(fmt::format("pair probability {} outside [0, 1]", pair_probability));
  }
}

namespace {

InterferenceParams characterize(const InterferometerConfig& cfg, double correlation) {
  const double dd = cfg.qpc1.delta() * cfg.qpc2.delta();
  InterferenceParams p;
  p.beta_plus = 1.0 + dd;
  p.beta_minus = 1.0 - dd;
  p.visibility = cfg.qpc1.epsilon() * cfg.qpc2.epsilon();
  p.correlation = correlation;
  p.background = std::cos(cfg.phi) - correlation;
  return p;
}

}  // namespace

DetectorParams detector_params(const InterferometerConfig& det, double gamma) {
  const double corr = std::sin(gamma / 2) * std::sin(gamma / 2 + det.phi);
  return DetectorParams{characterize(det, corr)};
}

SystemParams system_params(const InterferometerConfig& sys, double gamma) {
  const double corr = std::sin(gamma / 2) * std::sin(gamma / 2 - sys.phi);
  return SystemParams{characterize(sys, corr)};
}

JointInterferenceParams joint_interference_params(double phi_d, double phi_s, double gamma) {
  JointInterferenceParams j;
  j.phase_difference = phi_d - phi_s;
  j.joint_correlation = std::sin(gamma / 2) * std::sin(gamma / 2 + j.phase_difference);
  j.joint_background = std::cos(phi_d) * std::cos(phi_s) - j.joint_correlation;
  return j;
}

}  // namespace cmzi
