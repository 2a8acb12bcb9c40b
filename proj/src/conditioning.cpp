#include "cmzi/conditioning.hpp"

#include <cmath>

#include "cmzi/errors.hpp"

namespace cmzi {

namespace {

constexpr DetectorDrain kDetectorDrains[] = {DetectorDrain::D1, DetectorDrain::D2};
constexpr SystemDrain kSystemDrains[] = {SystemDrain::S1, SystemDrain::S2};

void require_marginal(double p, std::string_view drain) {
  if (!(p > kDegeneracyThreshold)) throw PostSelectionImpossible(std::string(drain), p);
}

}  // namespace

ConditionalTable::ConditionalTable(const JointStatistics& stats) {
  for (auto s : kSystemDrains) require_marginal(stats.system(s), name(s));
  for (auto d : kDetectorDrains) require_marginal(stats.detector(d), name(d));
  for (auto d : kDetectorDrains) {
    for (auto s : kSystemDrains) {
      const auto di = static_cast<std::size_t>(d);
      const auto si = static_cast<std::size_t>(s);
      det_given_sys_[di][si] = stats.joint(d, s) / stats.system(s);
      sys_given_det_[si][di] = stats.joint(d, s) / stats.detector(d);
    }
  }
}

ConditionalTable conditional_table(const JointStatistics& stats) { return ConditionalTable(stats); }

std::array<double, 2> detector_given_system(const JointStatistics& stats, SystemDrain s) {
  const double ps = stats.system(s);
  require_marginal(ps, name(s));
  return {stats.joint(DetectorDrain::D1, s) / ps, stats.joint(DetectorDrain::D2, s) / ps};
}

std::array<double, 2> system_given_detector(const JointStatistics& stats, DetectorDrain d) {
  const double pd = stats.detector(d);
  require_marginal(pd, name(d));
  return {stats.joint(d, SystemDrain::S1) / pd, stats.joint(d, SystemDrain::S2) / pd};
}

std::vector<ErasurePoint> erasure_curve(const InterferometerConfig& det,
                                        const InterferometerConfig& sys,
                                        std::span<const double> phi_s_sweep, double gamma,
                                        DetectorDrain condition) {
  std::vector<ErasurePoint> curve;
  curve.reserve(phi_s_sweep.size());
  for (double phi_s : phi_s_sweep) {
    InterferometerConfig tuned = sys;
    tuned.phi = phi_s;
    const JointStatistics stats = joint_statistics(joint_amplitudes(det, tuned, gamma));
    curve.push_back({phi_s, system_given_detector(stats, condition)[0], stats.system(SystemDrain::S1)});
  }
  return curve;
}

double FringeFit::visibility() const { return std::hypot(cos_amplitude, sin_amplitude) / offset; }

double FringeFit::phase() const { return std::atan2(sin_amplitude, cos_amplitude); }

FringeFit fit_fringe(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw DomainError("fringe fit needs at least three matched samples");
  }
  // Normal equations for the basis {1, cos x, sin x}.
  double g[3][3] = {};
  double rhs[3] = {};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double b[3] = {1.0, std::cos(x[i]), std::sin(x[i])};
    for (int r = 0; r < 3; ++r) {
      rhs[r] += b[r] * y[i];
      for (int c = 0; c < 3; ++c) g[r][c] += b[r] * b[c];
    }
  }
  auto det3 = [](const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det3(g);
  if (std::abs(d) < 1e-300) throw DomainError("fringe fit is singular for these sample phases");
  double coef[3];
  for (int k = 0; k < 3; ++k) {
    double m[3][3];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] = (c == k) ? rhs[r] : g[r][c];
    }
    coef[k] = det3(m) / d;
  }
  return {coef[0], coef[1], coef[2]};
}

double xi_joint_interference(const InterferometerConfig& det, const InterferometerConfig& sys,
                             double gamma) {
  const DetectorParams d = detector_params(det, gamma);
  const SystemParams s = system_params(sys, gamma);
  const JointInterferenceParams j = joint_interference_params(det.phi, sys.phi, gamma);
  if (d.visibility == 0.0) throw AmbiguousMeasurement(0.0, d.correlation);
  const double dd1 = det.qpc1.delta();
  const double dd2 = det.qpc2.delta();
  return j.joint_background - d.background * (s.background - dd1 * s.correlation) +
         s.correlation * dd2 * (1.0 - dd1 * dd1) / d.visibility;
}

double xi_ratio_efficient(double gamma, double phi_d, double phi_s) {
  return std::sin(gamma / 2) * std::cos(gamma / 2 - phi_s) / std::tan(gamma / 2 + phi_d);
}

double conditioned_average(const JointStatistics& stats, const ContextualValues& cv,
                           SystemDrain condition) {
  const auto p = detector_given_system(stats, condition);
  return cv.alpha_d1 * p[0] + cv.alpha_d2 * p[1];
}

ConditionedAverage conditioned_average(const InterferometerConfig& det,
                                       const InterferometerConfig& sys, double gamma,
                                       SystemDrain condition, const ObservableCoefficients& obs) {
  const JointStatistics stats = joint_statistics(joint_amplitudes(det, sys, gamma));
  const DetectorParams dp = detector_params(det, gamma);
  ConditionedAverage out;
  out.cv = contextual_values(obs, dp);
  out.post_selection = condition;
  out.value = conditioned_average(stats, out.cv, condition);
  out.post_selection_probability = stats.system(condition);
  out.delta_s1 = sys.qpc1.delta();
  out.delta_s2 = sys.qpc2.delta();
  out.system_visibility = sys.qpc1.epsilon() * sys.qpc2.epsilon();
  out.xi_over_gamma = dp.correlation != 0.0 ? xi_joint_interference(det, sys, gamma) / dp.correlation
                                            : 0.0;
  return out;
}

double parameterized_conditioned_average(const InterferometerConfig& det,
                                         const InterferometerConfig& sys, double gamma,
                                         SystemDrain condition) {
  const DetectorParams dp = detector_params(det, gamma);
  if (std::abs(dp.visibility * dp.correlation) <= kDivergenceThreshold) {
    throw AmbiguousMeasurement(dp.visibility, dp.correlation);
  }
  const auto ps = parameterized_system_probabilities(det, sys, gamma);
  const double p = ps[static_cast<std::size_t>(condition)];
  require_marginal(p, name(condition));
  const double vs = sys.qpc1.epsilon() * sys.qpc2.epsilon();
  const double term = vs * xi_joint_interference(det, sys, gamma) / dp.correlation;
  const double d1 = sys.qpc1.delta(), d2 = sys.qpc2.delta();
  return condition == SystemDrain::S1 ? (d1 + d2 - term) / (2 * p) : (d1 - d2 + term) / (2 * p);
}

namespace {

struct WeakDenominator {
  double numerator;
  double denominator;
  double interference;  ///< V^s cos(phi^s)
  double sign;          ///< +1 for S1, -1 for S2
};

WeakDenominator weak_parts(const InterferometerConfig& sys, SystemDrain condition) {
  const double d1 = sys.qpc1.delta(), d2 = sys.qpc2.delta();
  const double vc = sys.qpc1.epsilon() * sys.qpc2.epsilon() * std::cos(sys.phi);
  const double sign = condition == SystemDrain::S1 ? 1.0 : -1.0;
  const double beta = 1.0 + sign * d1 * d2;
  WeakDenominator w{d1 + sign * d2, beta - sign * vc, vc, sign};
  if (!(std::abs(w.denominator) > kDegeneracyThreshold)) {
    throw PostSelectionImpossible(std::string(name(condition)), 0.5 * w.denominator);
  }
  return w;
}

}  // namespace

WeakValueResult weak_value(const InterferometerConfig& sys, SystemDrain condition) {
  const WeakDenominator w = weak_parts(sys, condition);
  const double vs = sys.qpc1.epsilon() * sys.qpc2.epsilon() * std::sin(sys.phi);
  return {w.numerator / w.denominator, -w.sign * vs / w.denominator, condition};
}

std::complex<double> weak_value_amplitude_ratio(const InterferometerConfig& sys,
                                                SystemDrain condition) {
  const auto psi = reduced_system_state(sys);
  const Unitary2 u2 = qpc_unitary(sys.qpc2);
  const int col = static_cast<int>(condition);
  // a^dagger_arm = sum_S U(arm, S) a^dagger_S, so <S|arm> = U(arm, S).
  const Complex overlap = u2(0, col) * psi[0] + u2(1, col) * psi[1];
  const Complex weighted = u2(0, col) * psi[0] - u2(1, col) * psi[1];
  if (!(std::abs(overlap) > std::sqrt(kDegeneracyThreshold))) {
    throw PostSelectionImpossible(std::string(name(condition)), std::norm(overlap));
  }
  return weighted / overlap;
}

double semiweak_value(const InterferometerConfig& sys, int n, SystemDrain condition) {
  const WeakDenominator w = weak_parts(sys, condition);
  const double parity = (n % 2 == 0) ? 1.0 : -1.0;
  return (w.numerator - w.sign * parity * w.interference) / w.denominator;
}

}  // namespace cmzi
