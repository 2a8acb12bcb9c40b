#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cmzi/params.hpp"
#include "cmzi/scattering.hpp"

namespace cmzi::test {

inline constexpr double pi = std::numbers::pi;

inline InterferometerConfig balanced(double phi = 0.0) {
  return {QpcSetting::from_transmission(0.5), QpcSetting::from_transmission(0.5), phi};
}

inline InterferometerConfig mzi(double t1, double t2, double phi) {
  return {QpcSetting::from_transmission(t1), QpcSetting::from_transmission(t2), phi};
}

/// Random configurations with arbitrary QPC phases.
class RandomConfigs {
 public:
  explicit RandomConfigs(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

  QpcSetting qpc() {
    return QpcSetting::from_transmission(uniform(0.0, 1.0), uniform(-pi, pi), uniform(-pi, pi));
  }

  InterferometerConfig interferometer() { return {qpc(), qpc(), uniform(-2 * pi, 2 * pi)}; }

  double gamma() { return uniform(0.0, 2 * pi); }

 private:
  std::mt19937_64 rng_;
};

/// Wootters concurrence of a pure two-qubit state |psi> = sum c_ds |d s>,
/// computed as |<psi| sigma_y (x) sigma_y |psi*>| with an explicit 4x4 matrix.
inline double brute_force_concurrence(const ArmState& arms) {
  using C = std::complex<double>;
  // Basis order |d s>: LL, LU, UL, UU.
  const std::array<C, 4> psi = {arms.at(0, 0), arms.at(0, 1), arms.at(1, 0), arms.at(1, 1)};
  const C i{0.0, 1.0};
  const std::array<std::array<C, 2>, 2> sy = {{{0.0, -i}, {i, 0.0}}};
  std::array<std::array<C, 4>, 4> yy{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) yy[2 * a + b][2 * c + d] = sy[a][c] * sy[b][d];
  C overlap = 0.0;
  for (int r = 0; r < 4; ++r) {
    C row = 0.0;
    for (int c = 0; c < 4; ++c) row += yy[r][c] * std::conj(psi[c]);
    overlap += std::conj(psi[r]) * row;
  }
  return std::abs(overlap);
}

/// Adaptive Gauss-Kronrod integral of f over [a, b].
template <typename F>
double integrate(F f, double a, double b) {
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &error);
}

}  // namespace cmzi::test
