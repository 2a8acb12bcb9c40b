#include <doctest.h>

#include <cmath>

#include "cmzi/constants.hpp"
#include "cmzi/errors.hpp"
#include "cmzi/measurement.hpp"
#include "cmzi/scattering.hpp"
#include "support.hpp"

using namespace cmzi;
using cmzi::test::pi;

namespace {

double max_stats_diff(const JointStatistics& a, const JointStatistics& b) {
  double m = 0.0;
  for (auto d : {DetectorDrain::D1, DetectorDrain::D2})
    for (auto s : {SystemDrain::S1, SystemDrain::S2}) m = std::max(m, std::abs(a.joint(d, s) - b.joint(d, s)));
  return m;
}

}  // namespace

TEST_CASE("qpc unitary") {
  const auto id = qpc_unitary(qpc_from_transmission(1.0));
  CHECK(max_abs_diff(id.matrix(), Mat2::identity()) < 1e-15);

  const auto u = qpc_unitary(qpc_from_transmission(0.5));
  const double h = 1 / std::sqrt(2.0);
  CHECK(max_abs_diff(u.matrix(), Mat2(h, h * kI, h * kI, h)) < 1e-15);

  test::RandomConfigs gen(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = qpc_unitary(gen.qpc()).matrix();
    CHECK(max_abs_diff(v.adjoint() * v, Mat2::identity()) < 1e-12);
  }
  CHECK_THROWS_AS(Unitary2(Mat2(1.0, 1.0, 0.0, 1.0)), ConsistencyError);
}

TEST_CASE("arm state") {
  SUBCASE("deterministic paths") {
    const auto a = arm_state(test::mzi(1, 0.5, 0.3), test::mzi(1, 0.5, 0.2), 1.0);
    CHECK(std::abs(std::abs(a.amplitude[ArmState::LL]) - 1) < 1e-15);
    CHECK(std::abs(a.amplitude[ArmState::UU]) == 0.0);
    CHECK(std::abs(a.amplitude[ArmState::UL]) == 0.0);
    CHECK(std::abs(a.amplitude[ArmState::LU]) == 0.0);
  }
  SUBCASE("balanced, no coupling") {
    const auto a = arm_state(test::balanced(), test::balanced(), 0.0);
    for (const auto& c : a.amplitude) CHECK(std::abs(std::abs(c) - 0.5) < 1e-15);
  }
  SUBCASE("coupling phase on the L^d U^s arm") {
    const auto a0 = arm_state(test::balanced(), test::balanced(), 0.0);
    const auto api = arm_state(test::balanced(), test::balanced(), pi);
    CHECK(std::abs(api.amplitude[ArmState::LU] + a0.amplitude[ArmState::LU]) < 1e-15);
    for (auto k : {ArmState::LL, ArmState::UU, ArmState::UL}) {
      CHECK(std::abs(api.amplitude[k] - a0.amplitude[k]) < 1e-15);
    }
  }
  SUBCASE("normalized") {
    test::RandomConfigs gen(2);
    for (int i = 0; i < 1000; ++i) {
      CHECK(std::abs(arm_state(gen.interferometer(), gen.interferometer(), gen.gamma()).norm_squared() - 1) <
            1e-12);
    }
  }
}

TEST_CASE("concurrence") {
  const auto b = qpc_from_transmission(0.5);
  CHECK(concurrence(b, b, 0.0) == 0.0);
  CHECK(std::abs(concurrence(b, b, pi) - 1) < 1e-15);
  CHECK(std::abs(concurrence(b, qpc_from_transmission(0.8), pi / 2) - 0.8 * std::sin(pi / 4)) < 1e-12);
  CHECK(std::abs(concurrence(b, qpc_from_transmission(0.8), pi / 2) - 0.565685) < 1e-6);

  test::RandomConfigs gen(3);
  for (int i = 0; i < 1000; ++i) {
    const auto det = gen.interferometer(), sys = gen.interferometer();
    const double g = gen.gamma();
    const double brute = test::brute_force_concurrence(arm_state(det, sys, g));
    CHECK(std::abs(concurrence(det.qpc1, sys.qpc1, g) - brute) < 1e-10);
  }
}

TEST_CASE("joint amplitudes") {
  SUBCASE("matrix route agrees with the term-by-term sums") {
    test::RandomConfigs gen(4);
    for (int i = 0; i < 2000; ++i) {
      const auto det = gen.interferometer(), sys = gen.interferometer();
      const double g = gen.gamma();
      const auto direct = joint_amplitudes(det, sys, g);
      const auto routed = propagate(arm_state(det, sys, g), qpc_unitary(det.qpc2), qpc_unitary(sys.qpc2));
      for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(direct.amplitude[k] - routed.amplitude[k]) < 1e-12);
      CHECK(std::abs(direct.norm_squared() - 1) < 1e-12);
    }
  }
  SUBCASE("no coupling gives a product state") {
    test::RandomConfigs gen(5);
    for (int i = 0; i < 200; ++i) {
      const auto det = gen.interferometer(), sys = gen.interferometer();
      const auto c = joint_amplitudes(det, sys, 0.0);
      // Rank one: C11 C22 = C12 C21.
      const Complex lhs = c.at(DetectorDrain::D1, SystemDrain::S1) * c.at(DetectorDrain::D2, SystemDrain::S2);
      const Complex rhs = c.at(DetectorDrain::D1, SystemDrain::S2) * c.at(DetectorDrain::D2, SystemDrain::S1);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
  SUBCASE("deterministic lower system path") {
    // With T^s_1 = 1 only the L^s arms contribute, so each C_{D,S} is
    // (detector factor) x (system QPC2 entry from L^s).
    const auto sys = test::mzi(1.0, 0.3, 0.4);
    const auto c = joint_amplitudes(test::balanced(0.2), sys, 1.3);
    const auto u = qpc_unitary(sys.qpc2);
    for (auto d : {DetectorDrain::D1, DetectorDrain::D2}) {
      const Complex ratio_expected = u(0, 1) / u(0, 0);
      CHECK(std::abs(c.at(d, SystemDrain::S2) - ratio_expected * c.at(d, SystemDrain::S1)) < 1e-12);
    }
  }
}

TEST_CASE("joint statistics") {
  SUBCASE("isolated balanced detector at phi = 0 is dark in D1") {
    const auto stats = joint_statistics(joint_amplitudes(test::balanced(0), test::balanced(0), 0.0));
    CHECK(std::abs(stats.detector(DetectorDrain::D1)) < 1e-12);
  }
  SUBCASE("the (3/4, 1/4) configuration") {
    const auto stats = joint_statistics(joint_amplitudes(test::balanced(pi / 2), test::balanced(0), pi / 2));
    CHECK(std::abs(stats.detector(DetectorDrain::D1) - 0.75) < 1e-12);
    CHECK(std::abs(stats.detector(DetectorDrain::D2) - 0.25) < 1e-12);
  }
  SUBCASE("closed forms, completeness and marginals on a random sweep") {
    test::RandomConfigs gen(6);
    for (int i = 0; i < 10000; ++i) {
      const auto det = gen.interferometer(), sys = gen.interferometer();
      const double g = gen.gamma();
      const auto stats = joint_statistics(joint_amplitudes(det, sys, g));
      CHECK(max_stats_diff(stats, parameterized_joint_statistics(det, sys, g)) < 1e-12);
      const auto pd = parameterized_detector_probabilities(det, sys, g);
      const auto ps = parameterized_system_probabilities(det, sys, g);
      double total = 0.0;
      for (auto d : {DetectorDrain::D1, DetectorDrain::D2}) {
        CHECK(std::abs(stats.joint(d, SystemDrain::S1) + stats.joint(d, SystemDrain::S2) -
                       pd[static_cast<std::size_t>(d)]) < 1e-12);
        for (auto s : {SystemDrain::S1, SystemDrain::S2}) {
          total += stats.joint(d, s);
          CHECK(stats.joint(d, s) >= -1e-15);
        }
      }
      for (auto s : {SystemDrain::S1, SystemDrain::S2}) {
        CHECK(std::abs(stats.joint(DetectorDrain::D1, s) + stats.joint(DetectorDrain::D2, s) -
                       ps[static_cast<std::size_t>(s)]) < 1e-12);
      }
      CHECK(std::abs(total - 1) < 1e-12);
    }
  }
  SUBCASE("invalid tables") {
    CHECK_THROWS_AS(JointStatistics({{{0.5, 0.5}, {0.5, 0.5}}}), DomainError);
    CHECK_THROWS_AS(JointStatistics({{{1.2, -0.2}, {0.0, 0.0}}}), DomainError);
    JointAmplitudes bad;
    bad.amplitude = {1.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(joint_statistics(bad), DomainError);
  }
}

TEST_CASE("global phase immunity") {
  test::RandomConfigs gen(7);
  for (int i = 0; i < 1000; ++i) {
    const auto det = gen.interferometer(), sys = gen.interferometer();
    const double g = gen.gamma();
    const auto base = joint_statistics(joint_amplitudes(det, sys, g));
    // Second-QPC phases only rephase whole drains.
    auto det2 = det;
    auto sys2 = sys;
    det2.qpc2 = QpcSetting::from_transmission(det.qpc2.transmission(), gen.uniform(-pi, pi), gen.uniform(-pi, pi));
    sys2.qpc2 = QpcSetting::from_transmission(sys.qpc2.transmission(), gen.uniform(-pi, pi), gen.uniform(-pi, pi));
    CHECK(max_stats_diff(base, joint_statistics(joint_amplitudes(det2, sys2, g))) < 1e-12);
    // A common phase on a whole QPC unitary changes nothing.
    const Complex ph = std::polar(1.0, gen.uniform(-pi, pi));
    const auto routed = propagate(arm_state(det, sys, g), Unitary2(ph * qpc_unitary(det.qpc2).matrix()),
                                  Unitary2(ph * qpc_unitary(sys.qpc2).matrix()));
    CHECK(max_stats_diff(base, joint_statistics(routed)) < 1e-12);
  }
}

TEST_CASE("reduced system state reproduces the uncoupled system marginals") {
  test::RandomConfigs gen(8);
  for (int i = 0; i < 500; ++i) {
    const auto det = gen.interferometer(), sys = gen.interferometer();
    const auto psi = reduced_system_state(sys);
    const auto u = qpc_unitary(sys.qpc2);
    const auto stats = joint_statistics(joint_amplitudes(det, sys, 0.0));
    const double p_s1 = std::norm(u(0, 0) * psi[0] + u(1, 0) * psi[1]);
    CHECK(std::abs(p_s1 - stats.system(SystemDrain::S1)) < 1e-12);
  }
}

TEST_CASE("current and noise") {
  const PhysicalBias bias;
  CHECK(average_current(0.0, bias).amperes == 0.0);
  const double full = average_current(1.0, bias).amperes;
  CHECK(std::abs(full - 3.874045865e-10) < 1e-18);
  CHECK(std::abs(average_current(0.5, bias).amperes - full / 2) < 1e-24);
  CHECK_FALSE(average_current(1.0, bias).outside_low_bias_regime);
  PhysicalBias hot = bias;
  hot.temperature = 1.0;
  CHECK(average_current(1.0, hot).outside_low_bias_regime);
  PhysicalBias high = bias;
  high.voltage = 5e-3;
  CHECK(average_current(1.0, high).outside_low_bias_regime);
  CHECK_THROWS_AS(average_current(1.5, bias), DomainError);

  const double prefactor = 2 * std::pow(constants::elementary_charge, 3) * bias.voltage / constants::planck;

  SUBCASE("product state has no cross noise") {
    const auto stats = joint_statistics(joint_amplitudes(test::balanced(0.3), test::mzi(0.2, 0.6, 1.1), 0.0));
    for (auto d : {DetectorDrain::D1, DetectorDrain::D2})
      for (auto s : {SystemDrain::S1, SystemDrain::S2})
        CHECK(std::abs(cross_noise_power(stats, d, s, bias)) < 1e-12 * prefactor);
  }
  SUBCASE("deterministic system path has no cross noise") {
    const auto stats = joint_statistics(joint_amplitudes(test::balanced(0), test::mzi(1.0, 0.5, 0.0), pi));
    for (auto d : {DetectorDrain::D1, DetectorDrain::D2})
      for (auto s : {SystemDrain::S1, SystemDrain::S2})
        CHECK(std::abs(cross_noise_power(stats, d, s, bias)) < 1e-12 * prefactor);
  }
  SUBCASE("rows and columns of the correlation table sum to zero") {
    test::RandomConfigs gen(9);
    for (int i = 0; i < 1000; ++i) {
      const auto stats = joint_statistics(joint_amplitudes(gen.interferometer(), gen.interferometer(), gen.gamma()));
      for (auto d : {DetectorDrain::D1, DetectorDrain::D2}) {
        CHECK(std::abs(stats.correlation(d, SystemDrain::S1) + stats.correlation(d, SystemDrain::S2)) < 1e-12);
      }
      for (auto s : {SystemDrain::S1, SystemDrain::S2}) {
        CHECK(std::abs(stats.correlation(DetectorDrain::D1, s) + stats.correlation(DetectorDrain::D2, s)) < 1e-12);
      }
      const double c = stats.correlation(DetectorDrain::D1, SystemDrain::S1);
      CHECK(std::abs(cross_noise_power(stats, DetectorDrain::D1, SystemDrain::S1, bias) - prefactor * c) <
            1e-12 * prefactor);
    }
  }
  SUBCASE("strong coupling is correlated with alternating signs") {
    const auto stats = joint_statistics(joint_amplitudes(test::balanced(0), test::mzi(0.5, 0.8, 0.4), pi));
    const double c11 = stats.correlation(DetectorDrain::D1, SystemDrain::S1);
    CHECK(std::abs(c11) > 1e-3);
    CHECK(std::abs(stats.correlation(DetectorDrain::D2, SystemDrain::S2) - c11) < 1e-12);
    CHECK(std::abs(stats.correlation(DetectorDrain::D1, SystemDrain::S2) + c11) < 1e-12);
  }
}
