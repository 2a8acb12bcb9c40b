#pragma once

// Dense 2x2 complex matrices for the path space of a single interferometer.
// Row/column 0 is the lower arm L, row/column 1 is the upper arm U.

#include <array>
#include <complex>

namespace cmzi {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

struct Mat2 {
  std::array<Complex, 4> m{};  // row-major: (0,0) (0,1) (1,0) (1,1)

  constexpr Mat2() = default;
  constexpr Mat2(Complex a00, Complex a01, Complex a10, Complex a11) : m{a00, a01, a10, a11} {}

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(Complex d0, Complex d1) { return {d0, 0.0, 0.0, d1}; }

  constexpr Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
  constexpr const Complex& operator()(int r, int c) const {
    return m[static_cast<std::size_t>(2 * r + c)];
  }

  Mat2 adjoint() const;
  Complex trace() const { return m[0] + m[3]; }
  Complex determinant() const { return m[0] * m[3] - m[1] * m[2]; }

  friend Mat2 operator+(const Mat2& a, const Mat2& b);
  friend Mat2 operator-(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(Complex s, const Mat2& a);
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Mat2& a, const Mat2& b);

/// Apply a matrix to a column vector (amplitude on L, amplitude on U).
std::array<Complex, 2> apply(const Mat2& a, const std::array<Complex, 2>& v);

/// Identity and Pauli operators on the system path space; sigma_3 = |L><L| - |U><U|.
Mat2 pauli(int mu);

/// Unitary 2x2 matrix; construction checks U^dagger U = 1 to 1e-12.
class Unitary2 {
 public:
  explicit Unitary2(const Mat2& u);
  const Mat2& matrix() const noexcept { return u_; }
  Complex operator()(int r, int c) const { return u_(r, c); }

 private:
  Mat2 u_;
};

/// Hermitian 2x2 matrix; construction checks A = A^dagger to 1e-12 and
/// snaps the diagonal to real values.
class Hermitian2 {
 public:
  explicit Hermitian2(const Mat2& a);
  const Mat2& matrix() const noexcept { return a_; }
  Complex operator()(int r, int c) const { return a_(r, c); }

  /// Eigenvalues in ascending order.
  std::array<double, 2> eigenvalues() const;

 private:
  Mat2 a_;
};

}  // namespace cmzi
