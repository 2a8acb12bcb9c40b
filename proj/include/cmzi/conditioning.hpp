#pragma once

// Conditioning on joint drain detections: conditional probabilities,
// quantum-erasure fringes, conditioned which-path averages, and their weak
// and semi-weak coupling limits.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "cmzi/measurement.hpp"
#include "cmzi/params.hpp"
#include "cmzi/scattering.hpp"

namespace cmzi {

/// Marginals at or below this value cannot be conditioned on.
inline constexpr double kDegeneracyThreshold = 1e-12;

class ConditionalTable {
 public:
  /// Throws PostSelectionImpossible naming the first drain whose marginal
  /// is at or below kDegeneracyThreshold.
  explicit ConditionalTable(const JointStatistics& stats);

  /// P_{D|S}
  double detector_given(DetectorDrain d, SystemDrain s) const {
    return det_given_sys_[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)];
  }
  /// P_{S|D}
  double system_given(SystemDrain s, DetectorDrain d) const {
    return sys_given_det_[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)];
  }

 private:
  std::array<std::array<double, 2>, 2> det_given_sys_{};
  std::array<std::array<double, 2>, 2> sys_given_det_{};
};

ConditionalTable conditional_table(const JointStatistics& stats);

/// (P_{D1|S}, P_{D2|S}); only requires P_S above threshold.
std::array<double, 2> detector_given_system(const JointStatistics& stats, SystemDrain s);

/// (P_{S1|D}, P_{S2|D}); only requires P_D above threshold.
std::array<double, 2> system_given_detector(const JointStatistics& stats, DetectorDrain d);

struct ErasurePoint {
  double phi_s = 0.0;
  double conditional = 0.0;    ///< P_{S1|D}
  double unconditioned = 0.0;  ///< P_{S1}
};

/// P_{S1|D} across a sweep of the system tuning phase, computed through the
/// amplitude route. Points are returned in sweep order.
std::vector<ErasurePoint> erasure_curve(const InterferometerConfig& det,
                                        const InterferometerConfig& sys,
                                        std::span<const double> phi_s_sweep, double gamma,
                                        DetectorDrain condition);

/// Least-squares fit y = offset + a cos(x) + b sin(x).
struct FringeFit {
  double offset = 0.0;
  double cos_amplitude = 0.0;
  double sin_amplitude = 0.0;

  /// sqrt(a^2 + b^2) / offset
  double visibility() const;
  /// Phase p with y = offset + A cos(x - p).
  double phase() const;
};

FringeFit fit_fringe(std::span<const double> x, std::span<const double> y);

/// Joint-interference term Xi^ds entering the conditioned averages:
///   Xi = Delta^ds - Delta^d (Delta^s - delta^d_1 Gamma^s)
///        + Gamma^s delta^d_2 (1 - (delta^d_1)^2) / V^d.
/// Throws AmbiguousMeasurement when V^d is zero.
double xi_joint_interference(const InterferometerConfig& det, const InterferometerConfig& sys,
                             double gamma);

/// Xi^ds / Gamma^d for a detector with V^d = 1:
/// sin(g/2) cot(g/2 + phi^d) cos(g/2 - phi^s). Singular where g/2 + phi^d = n pi.
double xi_ratio_efficient(double gamma, double phi_d, double phi_s);

struct ConditionedAverage {
  double value = 0.0;
  SystemDrain post_selection = SystemDrain::S1;
  double xi_over_gamma = 0.0;  ///< Xi^ds / Gamma^d
  double delta_s1 = 0.0;
  double delta_s2 = 0.0;
  double system_visibility = 0.0;
  double post_selection_probability = 0.0;
  ContextualValues cv;
};

/// sum_D alpha_D P_{D|S}, evaluated through the amplitude route.
/// Throws PostSelectionImpossible or AmbiguousMeasurement.
ConditionedAverage conditioned_average(const InterferometerConfig& det,
                                       const InterferometerConfig& sys, double gamma,
                                       SystemDrain condition,
                                       const ObservableCoefficients& obs = {});

/// sum_D alpha_D P_{D|S} from given statistics and contextual values.
double conditioned_average(const JointStatistics& stats, const ContextualValues& cv,
                           SystemDrain condition);

/// Parameterized form for sigma_3:
/// (delta^s_1 +- delta^s_2 -+ V^s Xi/Gamma^d) / (2 P_S).
double parameterized_conditioned_average(const InterferometerConfig& det,
                                         const InterferometerConfig& sys, double gamma,
                                         SystemDrain condition);

struct WeakValueResult {
  double real_part = 0.0;
  double imag_part = 0.0;
  SystemDrain drain = SystemDrain::S1;

  std::complex<double> value() const { return {real_part, imag_part}; }
};

/// Weak value of sigma_3 post-selected on a system drain:
///   S1: (delta_1 + delta_2 - i V sin phi) / (beta+ - V cos phi)
///   S2: (delta_1 - delta_2 + i V sin phi) / (beta- + V cos phi)
/// Throws PostSelectionImpossible when the denominator is at most 1e-12.
WeakValueResult weak_value(const InterferometerConfig& sys, SystemDrain condition);

/// <S|sigma_3|psi> / <S|psi> computed from the reduced state and the second
/// system QPC.
std::complex<double> weak_value_amplitude_ratio(const InterferometerConfig& sys,
                                                SystemDrain condition);

/// Semi-weak value at detector tuning n pi:
///   (delta_1 +- delta_2 -+ (-1)^n V cos phi) / (beta+- -+ V cos phi).
double semiweak_value(const InterferometerConfig& sys, int n, SystemDrain condition);

}  // namespace cmzi
