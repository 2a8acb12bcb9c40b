#include "cmzi/interaction.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cmzi/constants.hpp"
#include "cmzi/errors.hpp"

namespace cmzi {

namespace {

/// alpha_c e^2 exp(-r/lambda) / (hbar r), in 1/s.
double interaction_rate(double r, const InteractionGeometry& g) {
  const double e = constants::elementary_charge;
  return g.coulomb_constant * e * e * std::exp(-r / g.screening_length) /
         (constants::reduced_planck * r);
}

}  // namespace

void InteractionGeometry::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(fmt::format("interaction geometry: {} must be positive, got {}", field, v));
    }
  };
  if (!(length >= 0.0) || !std::isfinite(length)) {
    throw DomainError(fmt::format("interaction geometry: length must be non-negative, got {}", length));
  }
  positive(separation, "separation");
  positive(screening_length, "screening_length");
  positive(speed, "speed");
  positive(coulomb_constant, "coulomb_constant");
}

double coulomb_constant(double relative_permittivity) {
  if (!(relative_permittivity > 0.0)) throw DomainError("relative permittivity must be positive");
  return 1.0 / (4.0 * std::numbers::pi * constants::vacuum_permittivity * relative_permittivity);
}

double coupling_phase(const InteractionGeometry& geom) {
  geom.validate();
  return interaction_rate(geom.separation, geom) * 2.0 * geom.length / geom.speed;
}

double position_phase(double x1, double x2, const InteractionGeometry& geom) {
  geom.validate();
  const double r = std::hypot(geom.separation, x2 - x1);
  return interaction_rate(r, geom) * (x1 + x2) / geom.speed;
}

double joint_wavenumber_shift(double x1, double x2, const InteractionGeometry& geom) {
  geom.validate();
  const double r = std::hypot(geom.separation, x2 - x1);
  return -interaction_rate(r, geom) / geom.speed;
}

InteractionGeometry with_target_coupling(const InteractionGeometry& geom, double target_gamma) {
  if (!(target_gamma > 0.0)) throw DomainError("target coupling phase must be positive");
  InteractionGeometry out = geom;
  out.coulomb_constant = 1.0;
  const double unit = coupling_phase(out);
  if (!(unit > 0.0)) throw DomainError("cannot reach a coupling phase with zero interaction length");
  out.coulomb_constant = target_gamma / unit;
  return out;
}

double dynamical_phase(double fermi_energy, double length, double fermi_velocity) {
  if (!(fermi_energy > 0.0 && length >= 0.0 && fermi_velocity > 0.0)) {
    throw DomainError("dynamical phase needs positive energy and velocity and non-negative length");
  }
  return 2.0 * fermi_energy * length / (constants::reduced_planck * fermi_velocity);
}

double sequential_phase(double energy, double t1, double t2) {
  if (t2 < t1) {
    throw DomainError(fmt::format("second detection at {} s precedes the first at {} s", t2, t1));
  }
  return energy * (t2 - t1) / constants::reduced_planck;
}

}  // namespace cmzi
