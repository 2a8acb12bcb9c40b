#pragma once

// The detector interferometer as a generalized which-path measurement on the
// system path space: measurement operators, the POVM they generate, and the
// contextual values that rebuild a0 + a3 sigma_3 from drain probabilities.

#include <array>
#include <variant>

#include "cmzi/linalg.hpp"
#include "cmzi/params.hpp"

namespace cmzi {

/// |V * Gamma| at or below this value makes the contextual values diverge.
inline constexpr double kDivergenceThreshold = 1e-9;

/// M_D = C_{D,L} |L><L| + C_{D,U} |U><U|.
struct MeasurementOperators {
  Mat2 d1;
  Mat2 d2;

  const Mat2& operator[](DetectorDrain d) const { return d == DetectorDrain::D1 ? d1 : d2; }
};

/// Probability operators E_D. Construction enforces E_D1 + E_D2 = 1 (1e-9)
/// and positivity (eigenvalues >= -1e-12).
class PovmPair {
 public:
  PovmPair(const Hermitian2& e_d1, const Hermitian2& e_d2);

  const Hermitian2& d1() const noexcept { return e_d1_; }
  const Hermitian2& d2() const noexcept { return e_d2_; }
  const Hermitian2& operator[](DetectorDrain d) const { return d == DetectorDrain::D1 ? e_d1_ : e_d2_; }

 private:
  Hermitian2 e_d1_;
  Hermitian2 e_d2_;
};

struct ContextualValues {
  double alpha_d1 = 0.0;
  double alpha_d2 = 0.0;
  ObservableCoefficients observable;

  double operator[](DetectorDrain d) const { return d == DetectorDrain::D1 ? alpha_d1 : alpha_d2; }
};

/// M_D = (phase_D) U_gamma sqrt(E_D) for a detector with unit visibility.
struct EfficientFactorization {
  Unitary2 disturbance;  ///< exp(i (gamma/2) |U><U|)
  Hermitian2 root_d1;    ///< diag(sin(phi/2), sin((phi+gamma)/2))
  Hermitian2 root_d2;    ///< diag(cos(phi/2), cos((phi+gamma)/2))
  /// Global phases stripped from M_D1 and M_D2:
  /// pi/2 + chi^d_2 + phi/2 and pi/2 + xi^d_2 + phi/2.
  std::array<double, 2> dropped_phases{};
};

MeasurementOperators measurement_operators(const InterferometerConfig& det, double gamma);

/// E_D = M_D^dagger M_D. Throws ConsistencyError when completeness fails by more than 1e-9.
PovmPair povm_pair(const MeasurementOperators& m);

/// <psi|E|psi> for a normalized system state.
double expectation(const Hermitian2& e, const std::array<Complex, 2>& state);

/// Components a_mu = Tr[A sigma_mu]/2. Throws DomainError if A is not
/// Hermitian to 1e-9.
std::array<double, 4> decompose_observable(const Mat2& a);

/// Unique contextual values for a0 + a3 sigma_3:
///   alpha_D1 = a0 - (a3/Gamma)(beta-/V + Delta),
///   alpha_D2 = a0 + (a3/Gamma)(beta+/V - Delta).
/// An observable with a3 = 0 needs no correlation and returns (a0, a0).
/// Throws AmbiguousMeasurement when |V Gamma| <= kDivergenceThreshold.
ContextualValues contextual_values(const ObservableCoefficients& obs, const DetectorParams& p);

/// alpha_D1 P_D1 + alpha_D2 P_D2. Throws DomainError unless P_D1 + P_D2 = 1 to 1e-9.
double reconstruct_average(const ContextualValues& cv, double p_d1, double p_d2);

/// Throws DomainError unless the detector visibility is 1 within 1e-9.
EfficientFactorization efficient_factorization(const InterferometerConfig& det, double gamma);

/// Rebuild M_D1, M_D2 from a factorization.
MeasurementOperators reconstruct_operators(const EfficientFactorization& f);

struct StrongLimit {};
struct WeakLimit {};
struct SemiWeakLimit {
  int n = 0;  ///< detector tuning phi^d = n pi
};
using LimitRegime = std::variant<StrongLimit, WeakLimit, SemiWeakLimit>;

/// Limiting contextual values and probability operators of an efficient
/// detector (V^d = 1) for the which-path operator sigma_3. The weak forms are
/// first order in gamma and need not be positive outside that regime, so the
/// operators are returned without POVM validation.
struct LimitForms {
  ContextualValues cv;
  Hermitian2 e_d1;
  Hermitian2 e_d2;
};

/// Strong requires gamma = pi, weak requires phi^d != n pi, semi-weak requires
/// phi^d = n pi (all to 1e-9); a mismatch throws DomainError. A zero
/// denominator throws AmbiguousMeasurement.
LimitForms limit_contextual_values(const LimitRegime& regime, double gamma, double phi_d);

}  // namespace cmzi
