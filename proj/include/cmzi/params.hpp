#pragma once

// Scalar parameterizations of quantum point contacts (QPCs), single
// interferometers, and the Coulomb coupling between the two interferometers.
// All angles are radians.

#include <complex>
#include <string_view>

namespace cmzi {

enum class DetectorDrain { D1 = 0, D2 = 1 };
enum class SystemDrain { S1 = 0, S2 = 1 };

std::string_view name(DetectorDrain d);
std::string_view name(SystemDrain s);

/// One beam-splitting QPC. Transmission T = cos^2(theta), reflection
/// R = sin^2(theta), path bias delta = T - R, wave-like weight
/// epsilon = 2 sqrt(T R) >= 0.
class QpcSetting {
 public:
  /// Balanced, phase-free QPC (T = 1/2).
  QpcSetting();

  static QpcSetting from_transmission(double transmission, double chi = 0.0, double xi = 0.0);
  static QpcSetting from_balance_angle(double theta, double chi = 0.0, double xi = 0.0);

  double transmission() const noexcept { return T_; }
  double reflection() const noexcept { return R_; }
  double delta() const noexcept { return delta_; }
  double epsilon() const noexcept { return epsilon_; }
  double theta() const noexcept { return theta_; }
  double chi() const noexcept { return chi_; }
  double xi() const noexcept { return xi_; }

  /// Transmission amplitude t = sqrt(T).
  double t() const;
  /// Reflection amplitude r = i sqrt(R).
  std::complex<double> r() const;

 private:
  QpcSetting(double T, double theta, double chi, double xi);

  double T_;
  double R_;
  double delta_;
  double epsilon_;
  double theta_;
  double chi_;
  double xi_;
};

/// Free-function spelling of QpcSetting::from_transmission.
QpcSetting qpc_from_transmission(double transmission, double chi = 0.0, double xi = 0.0);

/// Two QPCs plus the composite tuning phase of one interferometer.
/// The tuning phase already contains the Aharonov-Bohm phase, the kinetic
/// arm-phase difference and the first QPC's phase difference chi_1 - xi_1.
struct InterferometerConfig {
  QpcSetting qpc1;
  QpcSetting qpc2;
  double phi = 0.0;
};

/// Coupling-phase distribution: raised cosine of half-width sigma centred
/// on gamma, with pair-emission probability P_p (unpaired emissions see
/// gamma = 0).
class CouplingModel {
 public:
  CouplingModel() = default;
  /// Throws DomainError unless gamma in [0, 2 pi], sigma in [0, pi] and
  /// pair_probability in [0, 1].
  CouplingModel(double gamma, double sigma = 0.0, double pair_probability = 1.0);

  double gamma() const noexcept { return gamma_; }
  double sigma() const noexcept { return sigma_; }
  double pair_probability() const noexcept { return pair_probability_; }
  bool is_deterministic() const noexcept { return sigma_ == 0.0 && pair_probability_ == 1.0; }

 private:
  double gamma_ = 0.0;
  double sigma_ = 0.0;
  double pair_probability_ = 1.0;
};

/// Closed-form characterization of one interferometer under the coupling.
struct InterferenceParams {
  double beta_plus = 1.0;   ///< 1 + delta_1 delta_2
  double beta_minus = 1.0;  ///< 1 - delta_1 delta_2
  double visibility = 0.0;  ///< epsilon_1 epsilon_2
  double correlation = 0.0; ///< Gamma: coupling-induced part of the interference
  double background = 0.0;  ///< Delta = cos(phi) - Gamma
};

struct DetectorParams : InterferenceParams {};
struct SystemParams : InterferenceParams {};

struct JointInterferenceParams {
  double joint_background = 0.0;   ///< Delta^ds = cos phi^d cos phi^s - Gamma^ds
  double joint_correlation = 0.0;  ///< Gamma^ds = sin(g/2) sin(g/2 + phi^d - phi^s)
  double phase_difference = 0.0;   ///< phi^d - phi^s
};

/// Compatible observable a0 * 1 + a3 * sigma_3; defaults to the which-path operator.
struct ObservableCoefficients {
  double a0 = 0.0;
  double a3 = 1.0;
};

/// Gamma^d = sin(g/2) sin(g/2 + phi^d), Delta^d = cos(phi^d) - Gamma^d.
DetectorParams detector_params(const InterferometerConfig& det, double gamma);

/// Gamma^s = sin(g/2) sin(g/2 - phi^s), Delta^s = cos(phi^s) - Gamma^s.
SystemParams system_params(const InterferometerConfig& sys, double gamma);

JointInterferenceParams joint_interference_params(double phi_d, double phi_s, double gamma);

}  // namespace cmzi
