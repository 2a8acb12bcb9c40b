#pragma once

// Screened-Coulomb interaction between co-propagating edge excitations and
// the phases it produces.

#include <numbers>

#include "cmzi/constants.hpp"

namespace cmzi {

/// Co-propagation geometry. The potential between the excitations is
/// alpha_c e^2 exp(-r/lambda) / r, so alpha_c is in J m / C^2 (for a bare
/// Coulomb potential, 1 / (4 pi eps0 eps_r)).
struct InteractionGeometry {
  double length = 1e-6;                ///< L, m
  double separation = 100e-9;          ///< d, m
  double screening_length = 100e-9;    ///< lambda, m
  double speed = 1e5;                  ///< v, m/s
  double coulomb_constant = 1.0 / (4.0 * std::numbers::pi * constants::vacuum_permittivity * 12.9);  ///< alpha_c, GaAs

  /// Throws DomainError unless every field is positive (length may be 0).
  void validate() const;
};

/// 1 / (4 pi eps0 eps_r) in J m / C^2.
double coulomb_constant(double relative_permittivity);

/// gamma(L, L) = (alpha_c e^2 / (hbar d)) exp(-d/lambda) (2 L / v).
double coupling_phase(const InteractionGeometry& geom);

/// gamma(x1, x2) = (alpha_c e^2 / (hbar r)) exp(-r/lambda) (x1 + x2) / v,
/// r = sqrt(d^2 + (x2 - x1)^2).
double position_phase(double x1, double x2, const InteractionGeometry& geom);

/// Coulomb shift of the joint wave number at (x1, x2):
/// -(alpha_c e^2 / (hbar v r)) exp(-r/lambda), in 1/m along x1 + x2.
double joint_wavenumber_shift(double x1, double x2, const InteractionGeometry& geom);

/// Copy of `geom` with alpha_c chosen so that coupling_phase equals
/// `target_gamma`. Throws DomainError for zero length or a non-positive target.
InteractionGeometry with_target_coupling(const InteractionGeometry& geom, double target_gamma);

/// Free single-particle phase 2 E_F L / (hbar v_F); E_F in joules.
double dynamical_phase(double fermi_energy, double length, double fermi_velocity);

/// Global phase E (t2 - t1) / hbar between sequential detections; E in
/// joules. Throws DomainError when t2 < t1.
double sequential_phase(double energy, double t1, double t2);

}  // namespace cmzi
