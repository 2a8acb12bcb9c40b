#include "cmzi/measurement.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cmzi/errors.hpp"

namespace cmzi {

namespace {

constexpr double kCompletenessTol = 1e-9;
constexpr double kPositivityTol = 1e-12;
constexpr double kRegimeTol = 1e-9;

Complex phase(double angle) { return std::polar(1.0, angle); }

Hermitian2 real_diag(double l, double u) { return Hermitian2(Mat2::diag(l, u)); }

}  // namespace

PovmPair::PovmPair(const Hermitian2& e_d1, const Hermitian2& e_d2) : e_d1_(e_d1), e_d2_(e_d2) {
  const double residual = max_abs_diff(e_d1.matrix() + e_d2.matrix(), Mat2::identity());
  if (residual > kCompletenessTol) {
    throw ConsistencyError(fmt::format("POVM completeness violated by {:.3g}", residual));
  }
  for (const auto* e : {&e_d1_, &e_d2_}) {
    if (e->eigenvalues()[0] < -kPositivityTol) {
      throw ConsistencyError("POVM element is not positive semidefinite");
    }
  }
}

MeasurementOperators measurement_operators(const InterferometerConfig& det, double gamma) {
  const Complex t1 = det.qpc1.t(), r1 = det.qpc1.r();
  const Complex t2 = det.qpc2.t(), r2 = det.qpc2.r();
  const Complex e_l = phase(det.phi);
  const Complex e_u = phase(det.phi + gamma);
  const Complex chi2 = phase(det.qpc2.chi());
  const Complex xi2 = phase(det.qpc2.xi());

  MeasurementOperators m;
  m.d1 = Mat2::diag(chi2 * (t1 * t2 * e_l + r1 * r2), chi2 * (t1 * t2 * e_u + r1 * r2));
  m.d2 = Mat2::diag(xi2 * (t1 * r2 * e_l + r1 * t2), xi2 * (t1 * r2 * e_u + r1 * t2));
  return m;
}

PovmPair povm_pair(const MeasurementOperators& m) {
  return PovmPair(Hermitian2(m.d1.adjoint() * m.d1), Hermitian2(m.d2.adjoint() * m.d2));
}

double expectation(const Hermitian2& e, const std::array<Complex, 2>& state) {
  const auto v = apply(e.matrix(), state);
  return (std::conj(state[0]) * v[0] + std::conj(state[1]) * v[1]).real();
}

std::array<double, 4> decompose_observable(const Mat2& a) {
  if (max_abs_diff(a, a.adjoint()) > 1e-9) {
    throw DomainError("observable is not Hermitian");
  }
  std::array<double, 4> out{};
  for (int mu = 0; mu < 4; ++mu) {
    out[static_cast<std::size_t>(mu)] = 0.5 * (a * pauli(mu)).trace().real();
  }
  return out;
}

ContextualValues contextual_values(const ObservableCoefficients& obs, const DetectorParams& p) {
  ContextualValues cv;
  cv.observable = obs;
  if (obs.a3 == 0.0) {
    cv.alpha_d1 = cv.alpha_d2 = obs.a0;
    return cv;
  }
  if (std::abs(p.visibility * p.correlation) <= kDivergenceThreshold) {
    throw AmbiguousMeasurement(p.visibility, p.correlation);
  }
  const double scale = obs.a3 / p.correlation;
  cv.alpha_d1 = obs.a0 - scale * (p.beta_minus / p.visibility + p.background);
  cv.alpha_d2 = obs.a0 + scale * (p.beta_plus / p.visibility - p.background);
  return cv;
}

double reconstruct_average(const ContextualValues& cv, double p_d1, double p_d2) {
  if (std::abs(p_d1 + p_d2 - 1.0) > 1e-9) {
    throw DomainError(fmt::format("drain probabilities sum to {}, expected 1", p_d1 + p_d2));
  }
  return cv.alpha_d1 * p_d1 + cv.alpha_d2 * p_d2;
}

EfficientFactorization efficient_factorization(const InterferometerConfig& det, double gamma) {
  const double v = det.qpc1.epsilon() * det.qpc2.epsilon();
  if (std::abs(v - 1.0) > 1e-9) {
    throw DomainError(fmt::format(
        "efficient factorization needs unit detector visibility, got V = {:.12g}", v));
  }
  const double phi = det.phi;
  return EfficientFactorization{
      Unitary2(Mat2::diag(1.0, phase(gamma / 2))),
      real_diag(std::sin(phi / 2), std::sin((phi + gamma) / 2)),
      real_diag(std::cos(phi / 2), std::cos((phi + gamma) / 2)),
      {std::numbers::pi / 2 + det.qpc2.chi() + phi / 2,
       std::numbers::pi / 2 + det.qpc2.xi() + phi / 2},
  };
}

MeasurementOperators reconstruct_operators(const EfficientFactorization& f) {
  const Mat2& u = f.disturbance.matrix();
  return {phase(f.dropped_phases[0]) * (u * f.root_d1.matrix()),
          phase(f.dropped_phases[1]) * (u * f.root_d2.matrix())};
}

namespace {

LimitForms strong_limit(double gamma, double phi_d) {
  if (std::abs(gamma - std::numbers::pi) > kRegimeTol) {
    throw DomainError("strong-coupling limit requires gamma = pi");
  }
  const double c = std::cos(phi_d);
  if (std::abs(c) <= kDivergenceThreshold) throw AmbiguousMeasurement(1.0, c);
  LimitForms out{{-1.0 / c, 1.0 / c, {}}, real_diag(0.5 * (1 - c), 0.5 * (1 + c)),
                 real_diag(0.5 * (1 + c), 0.5 * (1 - c))};
  return out;
}

LimitForms weak_limit(double gamma, double phi_d) {
  const double s = std::sin(phi_d);
  const double c = std::cos(phi_d);
  if (std::abs(s) <= kRegimeTol) {
    throw DomainError("weak limit requires a detector tuning away from n pi");
  }
  if (gamma == 0.0) throw AmbiguousMeasurement(1.0, 0.0);
  const double kick = 0.5 * gamma * s;
  return LimitForms{{1.0 - (2.0 / gamma) * (1.0 + c) / s, 1.0 + (2.0 / gamma) * (1.0 - c) / s, {}},
                    real_diag(0.5 * (1 - c), 0.5 * (1 - c) + kick),
                    real_diag(0.5 * (1 + c), 0.5 * (1 + c) - kick)};
}

LimitForms semiweak_limit(int n, double gamma, double phi_d) {
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  if (std::abs(std::cos(phi_d) - sign) > kRegimeTol) {
    throw DomainError(fmt::format("semi-weak limit with n = {} requires phi^d = {} pi", n, n));
  }
  const double s2 = std::pow(std::sin(gamma / 2), 2);
  const double c2 = std::pow(std::cos(gamma / 2), 2);
  if (s2 <= kDivergenceThreshold) throw AmbiguousMeasurement(1.0, sign * s2);
  const double base1 = 0.5 * (1 - sign);
  const double base2 = 0.5 * (1 + sign);
  return LimitForms{{-(sign + c2) / s2, (sign - c2) / s2, {}},
                    real_diag(base1, base1 + sign * s2),
                    real_diag(base2, base2 - sign * s2)};
}

}  // namespace

LimitForms limit_contextual_values(const LimitRegime& regime, double gamma, double phi_d) {
  struct Visitor {
    double gamma;
    double phi_d;
    LimitForms operator()(StrongLimit) const { return strong_limit(gamma, phi_d); }
    LimitForms operator()(WeakLimit) const { return weak_limit(gamma, phi_d); }
    LimitForms operator()(SemiWeakLimit s) const { return semiweak_limit(s.n, gamma, phi_d); }
  };
  return std::visit(Visitor{gamma, phi_d}, regime);
}

}  // namespace cmzi
