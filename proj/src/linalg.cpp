#include "cmzi/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "cmzi/errors.hpp"

namespace cmzi {

namespace {
constexpr double kUnitaryTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
}  // namespace

Mat2 Mat2::adjoint() const {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]};
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2], a.m[3] - b.m[3]};
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
          a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
}

Mat2 operator*(Complex s, const Mat2& a) { return {s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}; }

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
  return worst;
}

std::array<Complex, 2> apply(const Mat2& a, const std::array<Complex, 2>& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1], a(1, 0) * v[0] + a(1, 1) * v[1]};
}

Mat2 pauli(int mu) {
  switch (mu) {
    case 0: return Mat2::identity();
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -kI, kI, 0.0};
    case 3: return {1.0, 0.0, 0.0, -1.0};
    default: throw DomainError("Pauli index must be in {0,1,2,3}");
  }
}

Unitary2::Unitary2(const Mat2& u) : u_(u) {
  if (max_abs_diff(u.adjoint() * u, Mat2::identity()) > kUnitaryTol) {
    throw ConsistencyError("matrix is not unitary to 1e-12");
  }
}

Hermitian2::Hermitian2(const Mat2& a) : a_(a) {
  if (max_abs_diff(a, a.adjoint()) > kHermitianTol) {
    throw DomainError("matrix is not Hermitian to 1e-12");
  }
  a_(0, 0) = a(0, 0).real();
  a_(1, 1) = a(1, 1).real();
  a_(1, 0) = std::conj(a_(0, 1));
}

std::array<double, 2> Hermitian2::eigenvalues() const {
  const double p = a_(0, 0).real();
  const double q = a_(1, 1).real();
  const double mean = 0.5 * (p + q);
  const double radius = std::hypot(0.5 * (p - q), std::abs(a_(0, 1)));
  return {mean - radius, mean + radius};
}

}  // namespace cmzi
