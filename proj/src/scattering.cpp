#include "cmzi/scattering.hpp"

#include <cmath>
#include <complex>

#include <fmt/format.h>

#include "cmzi/constants.hpp"
#include "cmzi/errors.hpp"

namespace cmzi {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kRangeTol = 1e-12;

Complex phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

Complex ArmState::at(int d, int s) const {
  if (d == 0 && s == 0) return amplitude[LL];
  if (d == 1 && s == 1) return amplitude[UU];
  if (d == 1 && s == 0) return amplitude[UL];
  return amplitude[LU];
}

double ArmState::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amplitude) n += std::norm(a);
  return n;
}

double JointAmplitudes::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amplitude) n += std::norm(a);
  return n;
}

JointStatistics::JointStatistics(const std::array<std::array<double, 2>, 2>& joint) : joint_(joint) {
  double total = 0.0;
  for (const auto& row : joint) {
    for (double p : row) {
      if (!(p >= -kRangeTol && p <= 1.0 + kRangeTol)) {
        throw DomainError(fmt::format("joint probability {} outside [0, 1]", p));
      }
      total += p;
    }
  }
  if (std::abs(total - 1.0) > kNormTol) {
    throw DomainError(fmt::format("joint probabilities sum to {}, expected 1", total));
  }
  detector_ = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
  system_ = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
}

double JointStatistics::correlation(DetectorDrain d, SystemDrain s) const {
  return joint(d, s) - detector(d) * system(s);
}

Unitary2 qpc_unitary(const QpcSetting& q) {
  const Complex t = q.t();
  const Complex r = q.r();
  const Complex ec = phase(q.chi());
  const Complex ex = phase(q.xi());
  return Unitary2(Mat2{ec * t, ex * r, ec * r, ex * t});
}

ArmState arm_state(const InterferometerConfig& det, const InterferometerConfig& sys, double gamma) {
  const double td = det.qpc1.t();
  const Complex rd = det.qpc1.r();
  const double ts = sys.qpc1.t();
  const Complex rs = sys.qpc1.r();
  ArmState a;
  a.amplitude[ArmState::LL] = td * ts * phase(det.phi + sys.phi);
  a.amplitude[ArmState::UU] = rd * rs;
  a.amplitude[ArmState::UL] = rd * ts * phase(sys.phi);
  a.amplitude[ArmState::LU] = td * rs * phase(det.phi + gamma);
  return a;
}

double concurrence(const QpcSetting& det_qpc1, const QpcSetting& sys_qpc1, double gamma) {
  return det_qpc1.epsilon() * sys_qpc1.epsilon() * std::abs(std::sin(gamma / 2));
}

std::array<Complex, 2> reduced_system_state(const InterferometerConfig& sys) {
  return {sys.qpc1.t() * phase(sys.phi), sys.qpc1.r()};
}

JointAmplitudes joint_amplitudes(const InterferometerConfig& det, const InterferometerConfig& sys,
                                 double gamma) {
  const Complex t1d = det.qpc1.t(), r1d = det.qpc1.r();
  const Complex t2d = det.qpc2.t(), r2d = det.qpc2.r();
  const Complex t1s = sys.qpc1.t(), r1s = sys.qpc1.r();
  const Complex t2s = sys.qpc2.t(), r2s = sys.qpc2.r();
  const Complex e_dg = phase(det.phi + gamma);
  const Complex e_s = phase(sys.phi);
  const Complex e_ds = phase(det.phi + sys.phi);

  JointAmplitudes c;
  c.amplitude[0] = phase(det.qpc2.chi() + sys.qpc2.chi()) *
                   (r1d * r2d * r1s * r2s + t1d * t2d * r1s * r2s * e_dg +
                    r1d * r2d * t1s * t2s * e_s + t1d * t2d * t1s * t2s * e_ds);
  c.amplitude[1] = phase(det.qpc2.chi() + sys.qpc2.xi()) *
                   (r1d * r2d * r1s * t2s + t1d * t2d * r1s * t2s * e_dg +
                    r1d * r2d * t1s * r2s * e_s + t1d * t2d * t1s * r2s * e_ds);
  c.amplitude[2] = phase(det.qpc2.xi() + sys.qpc2.chi()) *
                   (r1d * t2d * r1s * r2s + t1d * r2d * r1s * r2s * e_dg +
                    r1d * t2d * t1s * t2s * e_s + t1d * r2d * t1s * t2s * e_ds);
  c.amplitude[3] = phase(det.qpc2.xi() + sys.qpc2.xi()) *
                   (r1d * t2d * r1s * t2s + t1d * r2d * r1s * t2s * e_dg +
                    r1d * t2d * t1s * r2s * e_s + t1d * r2d * t1s * r2s * e_ds);
  return c;
}

JointAmplitudes propagate(const ArmState& arms, const Unitary2& det_qpc2, const Unitary2& sys_qpc2) {
  JointAmplitudes c;
  for (int dd = 0; dd < 2; ++dd) {
    for (int ss = 0; ss < 2; ++ss) {
      Complex sum = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) sum += arms.at(a, b) * det_qpc2(a, dd) * sys_qpc2(b, ss);
      }
      c.amplitude[static_cast<std::size_t>(2 * dd + ss)] = sum;
    }
  }
  return c;
}

JointStatistics joint_statistics(const JointAmplitudes& amps) {
  const double n = amps.norm_squared();
  if (std::abs(n - 1.0) > kNormTol) {
    throw DomainError(fmt::format("joint amplitudes have norm^2 {}, expected 1", n));
  }
  return JointStatistics({{{std::norm(amps.amplitude[0]), std::norm(amps.amplitude[1])},
                           {std::norm(amps.amplitude[2]), std::norm(amps.amplitude[3])}}});
}

JointStatistics parameterized_joint_statistics(const InterferometerConfig& det,
                                               const InterferometerConfig& sys, double gamma) {
  const DetectorParams d = detector_params(det, gamma);
  const SystemParams s = system_params(sys, gamma);
  const JointInterferenceParams j = joint_interference_params(det.phi, sys.phi, gamma);
  const double dd1 = det.qpc1.delta(), dd2 = det.qpc2.delta();
  const double ds1 = sys.qpc1.delta(), ds2 = sys.qpc2.delta();
  const double vv = d.visibility * s.visibility * j.joint_background;

  const double p11 = 0.25 * (d.beta_plus * s.beta_plus + vv -
                             d.visibility * (d.background * s.beta_plus + d.correlation * (ds1 + ds2)) -
                             s.visibility * (s.background * d.beta_plus - s.correlation * (dd1 + dd2)));
  const double p12 = 0.25 * (d.beta_plus * s.beta_minus - vv -
                             d.visibility * (d.background * s.beta_minus + d.correlation * (ds1 - ds2)) +
                             s.visibility * (s.background * d.beta_plus - s.correlation * (dd1 + dd2)));
  const double p21 = 0.25 * (d.beta_minus * s.beta_plus - vv +
                             d.visibility * (d.background * s.beta_plus + d.correlation * (ds1 + ds2)) -
                             s.visibility * (s.background * d.beta_minus - s.correlation * (dd1 - dd2)));
  const double p22 = 0.25 * (d.beta_minus * s.beta_minus + vv +
                             d.visibility * (d.background * s.beta_minus + d.correlation * (ds1 - ds2)) +
                             s.visibility * (s.background * d.beta_minus - s.correlation * (dd1 - dd2)));
  return JointStatistics({{{p11, p12}, {p21, p22}}});
}

std::array<double, 2> parameterized_detector_probabilities(const InterferometerConfig& det,
                                                           const InterferometerConfig& sys,
                                                           double gamma) {
  const DetectorParams d = detector_params(det, gamma);
  const double shift = d.visibility * (d.background + sys.qpc1.delta() * d.correlation);
  return {0.5 * (d.beta_plus - shift), 0.5 * (d.beta_minus + shift)};
}

std::array<double, 2> parameterized_system_probabilities(const InterferometerConfig& det,
                                                         const InterferometerConfig& sys,
                                                         double gamma) {
  const SystemParams s = system_params(sys, gamma);
  const double shift = s.visibility * (s.background - det.qpc1.delta() * s.correlation);
  return {0.5 * (s.beta_plus - shift), 0.5 * (s.beta_minus + shift)};
}

DrainCurrent average_current(double probability, const PhysicalBias& bias) {
  if (!(bias.voltage > 0.0)) throw DomainError("bias voltage must be positive");
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw DomainError(fmt::format("probability {} outside [0, 1]", probability));
  }
  using namespace constants;
  const double ev = elementary_charge * bias.voltage;
  const double kt = boltzmann * bias.temperature;
  const double ef = bias.fermi_energy_ev * elementary_charge;
  DrainCurrent out;
  out.amperes = conductance_quantum * bias.voltage * probability;
  out.outside_low_bias_regime = kt >= ev / 10.0 || ev >= ef / 10.0;
  return out;
}

double cross_noise_power(const JointStatistics& stats, DetectorDrain d, SystemDrain s,
                         const PhysicalBias& bias) {
  if (!(bias.voltage > 0.0)) throw DomainError("bias voltage must be positive");
  using namespace constants;
  const double prefactor = 2.0 * elementary_charge * conductance_quantum * bias.voltage;
  return prefactor * stats.correlation(d, s);
}

}  // namespace cmzi
