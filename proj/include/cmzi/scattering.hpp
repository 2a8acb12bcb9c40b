#pragma once

// Exact two-excitation scattering through the coupled interferometers.
//
// The global phase exp(i(phi_Ud + phi_Us + xi^d_1 + xi^s_1)) common to every
// amplitude is dropped throughout; no probability depends on it.

#include <array>

#include "cmzi/linalg.hpp"
#include "cmzi/params.hpp"

namespace cmzi {

/// Joint arm amplitudes just before the second pair of QPCs, on the basis
/// {L^d L^s, U^d U^s, U^d L^s, L^d U^s}.
struct ArmState {
  enum Index { LL = 0, UU = 1, UL = 2, LU = 3 };
  std::array<Complex, 4> amplitude{};

  /// Amplitude for detector arm `d` and system arm `s` (0 = L, 1 = U).
  Complex at(int d, int s) const;
  double norm_squared() const;
};

/// Joint drain amplitudes ordered C_{D1,S1}, C_{D1,S2}, C_{D2,S1}, C_{D2,S2}.
struct JointAmplitudes {
  std::array<Complex, 4> amplitude{};

  Complex at(DetectorDrain d, SystemDrain s) const {
    return amplitude[static_cast<std::size_t>(2 * static_cast<int>(d) + static_cast<int>(s))];
  }
  double norm_squared() const;
};

/// Joint drain probabilities with their marginals.
class JointStatistics {
 public:
  /// `joint[d][s]`; throws DomainError if an entry lies outside [0, 1]
  /// (beyond 1e-12) or the table does not sum to 1 within 1e-9.
  explicit JointStatistics(const std::array<std::array<double, 2>, 2>& joint);

  double joint(DetectorDrain d, SystemDrain s) const {
    return joint_[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)];
  }
  double detector(DetectorDrain d) const { return detector_[static_cast<std::size_t>(d)]; }
  double system(SystemDrain s) const { return system_[static_cast<std::size_t>(s)]; }

  /// P_{D,S} - P_D P_S.
  double correlation(DetectorDrain d, SystemDrain s) const;

 private:
  std::array<std::array<double, 2>, 2> joint_{};
  std::array<double, 2> detector_{};
  std::array<double, 2> system_{};
};

/// Source bias. Temperature only feeds the low-bias regime check.
struct PhysicalBias {
  double voltage = 10e-6;        ///< V, must be > 0
  double fermi_energy_ev = 0.01; ///< eV
  double temperature = 0.01;     ///< K
};

/// Average drain current in the low-bias approximation.
struct DrainCurrent {
  double amperes = 0.0;
  /// Set when k_B T >= eV/10 or eV >= E_F/10, i.e. outside E_F >> eV >> k_B T.
  bool outside_low_bias_regime = false;
};

/// [[e^{i chi} t, e^{i xi} r], [e^{i chi} r, e^{i xi} t]] with t = sqrt(T), r = i sqrt(R).
Unitary2 qpc_unitary(const QpcSetting& q);

ArmState arm_state(const InterferometerConfig& det, const InterferometerConfig& sys, double gamma);

/// Entanglement of the arm state: epsilon^d_1 epsilon^s_1 |sin(gamma/2)|.
double concurrence(const QpcSetting& det_qpc1, const QpcSetting& sys_qpc1, double gamma);

/// Reduced system state without interaction: e^{i phi^s} t^s_1 |L> + r^s_1 |U>.
std::array<Complex, 2> reduced_system_state(const InterferometerConfig& sys);

/// Joint drain amplitudes written out term by term (four paths per drain pair).
JointAmplitudes joint_amplitudes(const InterferometerConfig& det, const InterferometerConfig& sys,
                                 double gamma);

/// Matrix route: scatter an arm state through arbitrary second-QPC unitaries,
/// a^dagger_{arm} = sum_drain U(arm, drain) a^dagger_{drain}.
JointAmplitudes propagate(const ArmState& arms, const Unitary2& det_qpc2, const Unitary2& sys_qpc2);

/// |C_{D,S}|^2 with marginals. Throws DomainError when the amplitudes are
/// not normalized to 1e-9.
JointStatistics joint_statistics(const JointAmplitudes& amps);

/// Explicit parameterized joint probabilities (beta, V, Gamma, Delta and
/// Delta^ds form) for cross-checking the amplitude route.
JointStatistics parameterized_joint_statistics(const InterferometerConfig& det,
                                               const InterferometerConfig& sys, double gamma);

/// P_D1 = (beta+ - V(Delta + delta^s_1 Gamma))/2 and its complement.
std::array<double, 2> parameterized_detector_probabilities(const InterferometerConfig& det,
                                                           const InterferometerConfig& sys,
                                                           double gamma);

/// P_S1 = (beta^s_+ - V^s(Delta^s - delta^d_1 Gamma^s))/2 and its complement.
std::array<double, 2> parameterized_system_probabilities(const InterferometerConfig& det,
                                                         const InterferometerConfig& sys,
                                                         double gamma);

/// I = (e^2 V / h) P.
DrainCurrent average_current(double probability, const PhysicalBias& bias);

/// Zero-frequency cross-correlation noise power S_{D,S} = 2 (e^3 V / h)(P_{D,S} - P_D P_S).
double cross_noise_power(const JointStatistics& stats, DetectorDrain d, SystemDrain s,
                         const PhysicalBias& bias);

}  // namespace cmzi
