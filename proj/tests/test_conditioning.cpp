#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmzi/conditioning.hpp"
#include "cmzi/errors.hpp"
#include "support.hpp"

using namespace cmzi;
using cmzi::test::pi;

namespace {

constexpr DetectorDrain kD[] = {DetectorDrain::D1, DetectorDrain::D2};
constexpr SystemDrain kS[] = {SystemDrain::S1, SystemDrain::S2};

JointStatistics stats_of(const InterferometerConfig& det, const InterferometerConfig& sys, double g) {
  return joint_statistics(joint_amplitudes(det, sys, g));
}

std::vector<double> period_grid(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 2 * pi * static_cast<double>(i) / static_cast<double>(n);
  return x;
}

}  // namespace

TEST_CASE("conditional table") {
  SUBCASE("product state") {
    const auto stats = stats_of(test::mzi(0.3, 0.6, 0.5), test::mzi(0.7, 0.4, 1.0), 0.0);
    const ConditionalTable t(stats);
    for (auto d : kD)
      for (auto s : kS) CHECK(std::abs(t.detector_given(d, s) - stats.detector(d)) < 1e-12);
  }
  SUBCASE("dark-port correlation with a deterministic upper system path") {
    const auto stats = stats_of(test::balanced(0), test::mzi(0.0, 0.5, 0.0), pi);
    for (auto s : kS) CHECK(std::abs(detector_given_system(stats, s)[0] - 1) < 1e-12);
    try {
      conditional_table(stats);
      FAIL("expected PostSelectionImpossible");
    } catch (const PostSelectionImpossible& e) {
      CHECK(e.drain() == "D2");
      CHECK(e.probability() < 1e-12);
    }
    CHECK_THROWS_AS(system_given_detector(stats, DetectorDrain::D2), PostSelectionImpossible);
  }
  SUBCASE("columns sum to one on random configurations") {
    test::RandomConfigs gen(1);
    for (int i = 0; i < 2000; ++i) {
      const auto t = conditional_table(stats_of(gen.interferometer(), gen.interferometer(), gen.gamma()));
      for (auto s : kS) {
        CHECK(std::abs(t.detector_given(DetectorDrain::D1, s) + t.detector_given(DetectorDrain::D2, s) - 1) < 1e-12);
      }
      for (auto d : kD) {
        CHECK(std::abs(t.system_given(SystemDrain::S1, d) + t.system_given(SystemDrain::S2, d) - 1) < 1e-12);
      }
      for (auto d : kD)
        for (auto s : kS) {
          CHECK(t.detector_given(d, s) >= -1e-12);
          CHECK(t.detector_given(d, s) <= 1 + 1e-12);
        }
    }
  }
}

TEST_CASE("fringe fit") {
  const auto x = period_grid(40);
  std::vector<double> y;
  for (double v : x) y.push_back(0.5 + 0.2 * std::cos(v - 0.7));
  const auto f = fit_fringe(x, y);
  CHECK(std::abs(f.offset - 0.5) < 1e-14);
  CHECK(std::abs(f.visibility() - 0.4) < 1e-13);
  CHECK(std::abs(f.phase() - 0.7) < 1e-13);
  CHECK_THROWS_AS(fit_fringe(std::vector<double>{0, 1}, std::vector<double>{0, 1}), DomainError);
}

TEST_CASE("quantum erasure") {
  const auto phases = period_grid(72);
  SUBCASE("unambiguous detector leaves a flat conditional") {
    const auto curve = erasure_curve(test::balanced(0), test::balanced(), phases, pi, DetectorDrain::D1);
    for (const auto& p : curve) CHECK(std::abs(p.conditional - curve.front().conditional) < 1e-12);
  }
  SUBCASE("visibility follows |sin phi^d| and the fringe is shifted by pi/2") {
    for (int k = 0; k < 9; ++k) {
      const double phi_d = pi * k / 8.0;
      const auto curve = erasure_curve(test::balanced(phi_d), test::balanced(), phases, pi, DetectorDrain::D1);
      std::vector<double> y;
      for (const auto& p : curve) {
        y.push_back(p.conditional);
        CHECK(std::abs(p.unconditioned - 0.5) < 1e-12);
      }
      const auto fit = fit_fringe(phases, y);
      CHECK(std::abs(fit.visibility() - std::abs(std::sin(phi_d))) < 1e-6);
      if (std::abs(std::sin(phi_d)) > 1e-6) {
        // Uncoupled fringe of P_S1 is (1 - cos phi^s)/2 (phase pi); the conditioned one sits at -pi/2.
        CHECK(std::abs(std::abs(fit.phase()) - pi / 2) < 1e-9);
      }
    }
    const auto free = erasure_curve(test::balanced(pi / 2), test::balanced(), phases, 0.0, DetectorDrain::D1);
    std::vector<double> y0;
    for (const auto& p : free) y0.push_back(p.unconditioned);
    CHECK(std::abs(std::abs(fit_fringe(phases, y0).phase()) - pi) < 1e-9);
  }
  SUBCASE("complementary conditionals cancel in the unconditioned statistics") {
    test::RandomConfigs gen(2);
    for (int i = 0; i < 200; ++i) {
      auto det = gen.interferometer();
      auto sys = gen.interferometer();
      const auto stats = stats_of(det, sys, pi);
      const auto t = conditional_table(stats);
      const double total = t.system_given(SystemDrain::S1, DetectorDrain::D1) * stats.detector(DetectorDrain::D1) +
                           t.system_given(SystemDrain::S1, DetectorDrain::D2) * stats.detector(DetectorDrain::D2);
      CHECK(std::abs(total - stats.system(SystemDrain::S1)) < 1e-12);
    }
  }
}

TEST_CASE("joint interference term") {
  SUBCASE("efficient-detector form on a random sweep") {
    test::RandomConfigs gen(3);
    int checked = 0;
    for (int i = 0; i < 5000; ++i) {
      const auto det = InterferometerConfig{QpcSetting::from_transmission(0.5, gen.uniform(-pi, pi)),
                                            QpcSetting::from_transmission(0.5, 0.0, gen.uniform(-pi, pi)),
                                            gen.uniform(-pi, pi)};
      const auto sys = gen.interferometer();
      const double g = gen.gamma();
      const double gd = detector_params(det, g).correlation;
      const double tangent = std::tan(g / 2 + det.phi);
      if (std::abs(gd) < 1e-6 || std::abs(tangent) < 1e-6) continue;
      const double general = xi_joint_interference(det, sys, g);
      const double efficient = gd * xi_ratio_efficient(g, det.phi, sys.phi);
      CHECK(std::abs(general - efficient) < 1e-12 * std::max(1.0, std::abs(general)));
      ++checked;
    }
    CHECK(checked > 4000);
  }
  SUBCASE("balanced detector drops the efficiency correction") {
    test::RandomConfigs gen(4);
    for (int i = 0; i < 200; ++i) {
      const auto det = test::balanced(gen.uniform(-pi, pi));
      const auto sys = gen.interferometer();
      const double g = gen.gamma();
      const auto d = detector_params(det, g);
      const auto s = system_params(sys, g);
      const auto j = joint_interference_params(det.phi, sys.phi, g);
      CHECK(std::abs(xi_joint_interference(det, sys, g) - (j.joint_background - d.background * s.background)) <
            1e-12);
    }
  }
  SUBCASE("vanishes without coupling") {
    test::RandomConfigs gen(5);
    for (int i = 0; i < 200; ++i) {
      CHECK(std::abs(xi_joint_interference(gen.interferometer(), gen.interferometer(), 0.0)) < 1e-12);
    }
  }
  SUBCASE("zero visibility is ambiguous") {
    CHECK_THROWS_AS(xi_joint_interference(test::mzi(1.0, 0.5, 0.0), test::balanced(), 1.0), AmbiguousMeasurement);
  }
}

TEST_CASE("conditioned averages") {
  SUBCASE("pipeline equals the parameterized form; consistency and bounds") {
    test::RandomConfigs gen(6);
    int checked = 0;
    for (int i = 0; i < 5000; ++i) {
      const auto det = gen.interferometer(), sys = gen.interferometer();
      const double g = gen.gamma();
      const auto p = detector_params(det, g);
      if (std::abs(p.visibility * p.correlation) < 1e-4) continue;
      const auto stats = stats_of(det, sys, g);
      if (stats.system(SystemDrain::S1) < 1e-6 || stats.system(SystemDrain::S2) < 1e-6) continue;
      double weighted = 0.0;
      for (auto s : kS) {
        const auto avg = conditioned_average(det, sys, g, s);
        const double scale = std::max({1.0, std::abs(avg.cv.alpha_d1), std::abs(avg.cv.alpha_d2)}) /
                             avg.post_selection_probability;
        CHECK(std::abs(avg.value - parameterized_conditioned_average(det, sys, g, s)) < 1e-10 * scale);
        CHECK(avg.value <= std::max(avg.cv.alpha_d1, avg.cv.alpha_d2) + 1e-9 * scale);
        CHECK(avg.value >= std::min(avg.cv.alpha_d1, avg.cv.alpha_d2) - 1e-9 * scale);
        weighted += avg.value * avg.post_selection_probability;
      }
      const double scale = std::max({1.0, std::abs(contextual_values({}, p).alpha_d1),
                                     std::abs(contextual_values({}, p).alpha_d2)});
      CHECK(std::abs(weighted - sys.qpc1.delta()) < 1e-10 * scale);
      ++checked;
    }
    CHECK(checked > 3000);
  }
  SUBCASE("deterministic system path") {
    for (double g : {0.3, 1.0, pi, 5.0}) {
      for (auto s : kS) {
        CHECK(std::abs(conditioned_average(test::balanced(0.4), test::mzi(1.0, 0.3, 0.2), g, s).value - 1) < 1e-10);
        CHECK(std::abs(conditioned_average(test::balanced(0.4), test::mzi(0.0, 0.3, 0.2), g, s).value + 1) < 1e-10);
      }
    }
  }
  SUBCASE("strong coupling is detector independent") {
    const auto sys = test::mzi(0.8, 0.3, 0.9);
    const double d1 = sys.qpc1.delta(), d2 = sys.qpc2.delta();
    const auto s1 = conditioned_average(test::balanced(0), sys, pi, SystemDrain::S1);
    const auto s2 = conditioned_average(test::balanced(0), sys, pi, SystemDrain::S2);
    CHECK(std::abs(s1.value - (d1 + d2) / (1 + d1 * d2)) < 1e-12);
    CHECK(std::abs(s2.value - (d1 - d2) / (1 - d1 * d2)) < 1e-12);
  }
  SUBCASE("erasure-dominated divergence near phi^d = pi/2") {
    const auto avg = conditioned_average(test::balanced(pi / 2 - 0.01), test::balanced(pi / 2), pi, SystemDrain::S1);
    CHECK(std::abs(avg.value) > 50);
  }
  SUBCASE("post-selection on an empty drain") {
    // Upper system arm into a fully transmitting QPC never reaches S1.
    CHECK_THROWS_AS(conditioned_average(test::balanced(0), test::mzi(0.0, 1.0, 0.0), pi, SystemDrain::S1),
                    PostSelectionImpossible);
    CHECK_THROWS_AS(parameterized_conditioned_average(test::balanced(0), test::mzi(0.0, 1.0, 0.0), pi,
                                                      SystemDrain::S1),
                    PostSelectionImpossible);
  }
}

TEST_CASE("weak and semi-weak values") {
  const auto sys = test::mzi(0.8, 0.5, 0.0);
  SUBCASE("symmetric system") {
    const auto sym = test::mzi(0.5, 0.5, 0.3);
    CHECK(std::abs(weak_value(sym, SystemDrain::S1).real_part) < 1e-15);
    CHECK(std::abs(weak_value(sym, SystemDrain::S2).real_part) < 1e-15);
  }
  SUBCASE("anomalous weak value") {
    CHECK(std::abs(weak_value(sys, SystemDrain::S1).real_part - 3.0) < 1e-12);
    CHECK(std::abs(weak_value(sys, SystemDrain::S2).real_part - 1.0 / 3.0) < 1e-12);
    for (auto s : kS) {
      const double cond = conditioned_average(test::balanced(pi / 2), sys, 1e-4, s).value;
      CHECK(std::abs(cond - weak_value(sys, s).real_part) < 1e-2);
    }
  }
  SUBCASE("semi-weak value") {
    CHECK(std::abs(semiweak_value(sys, 0, SystemDrain::S1) + 1.0) < 1e-12);
    const double cond = conditioned_average(test::balanced(0), sys, 1e-4, SystemDrain::S1).value;
    CHECK(std::abs(cond + 1.0) < 1e-2);
    const auto novis = test::mzi(0.8, 1.0, 0.4);
    for (auto s : kS) {
      CHECK(std::abs(semiweak_value(novis, 0, s) - weak_value(novis, s).real_part) < 1e-15);
    }
    const double n0 = semiweak_value(sys, 0, SystemDrain::S1), n1 = semiweak_value(sys, 1, SystemDrain::S1);
    const double vc = sys.qpc1.epsilon() * sys.qpc2.epsilon();
    CHECK(std::abs((n1 - n0) * (1 + sys.qpc1.delta() * sys.qpc2.delta() - vc) - 2 * vc) < 1e-12);
  }
  SUBCASE("imaginary parts match the amplitude ratio") {
    test::RandomConfigs gen(7);
    for (int i = 0; i < 2000; ++i) {
      const auto s = gen.interferometer();
      for (auto drain : kS) {
        const auto w = weak_value(s, drain);
        const auto ratio = weak_value_amplitude_ratio(s, drain);
        const double scale = std::max(1.0, std::abs(ratio));
        CHECK(std::abs(w.real_part - ratio.real()) < 1e-9 * scale);
        CHECK(std::abs(w.imag_part - ratio.imag()) < 1e-9 * scale);
      }
    }
  }
  SUBCASE("competing limits") {
    std::vector<double> weak_err, semi_err;
    for (double g : {0.02, 0.01, 0.005}) {
      weak_err.push_back(std::abs(conditioned_average(test::balanced(pi / 2), sys, g, SystemDrain::S1).value -
                                  weak_value(sys, SystemDrain::S1).real_part));
      semi_err.push_back(std::abs(conditioned_average(test::balanced(0), sys, g, SystemDrain::S1).value -
                                  semiweak_value(sys, 0, SystemDrain::S1)));
    }
    for (std::size_t k = 1; k < 3; ++k) {
      CHECK(std::log2(weak_err[k - 1] / weak_err[k]) >= 0.9);
      CHECK(std::log2(semi_err[k - 1] / semi_err[k]) >= 1.8);
    }
  }
  SUBCASE("impossible post-selection") {
    const auto stuck = test::mzi(1.0, 1.0, 0.0);
    CHECK_THROWS_AS(weak_value(stuck, SystemDrain::S2), PostSelectionImpossible);
    CHECK_THROWS_AS(semiweak_value(stuck, 0, SystemDrain::S2), PostSelectionImpossible);
    CHECK_THROWS_AS(weak_value_amplitude_ratio(stuck, SystemDrain::S2), PostSelectionImpossible);
  }
}
