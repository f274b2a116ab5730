#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace kobvis {

// Extended precision: the counterexample profiles reach values near e^-1500,
// far below the double range.
using Real = long double;
using Complex = std::complex<Real>;

inline constexpr Real kInfinity = std::numeric_limits<Real>::infinity();
inline constexpr Real kPi = 3.141592653589793238462643383279502884L;

enum class ErrorCode {
  PointOutsideDomain,
  ZeroDirection,
  NotOnBoundary,
  NonSmoothPoint,
  OutOfRange,
  BadParameters,
  DisconnectedGrid,
  AttachmentFailure,
  OutsideHalfPlane,
  EscapedDepthCap,
  BalanceViolation,
  NonFiniteIntegrand,
  InvalidConfig,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A point of C^2 stored as real coordinates (Re z1, Im z1, Re z2, Im z2).
struct CPoint {
  Real re1 = 0, im1 = 0, re2 = 0, im2 = 0;

  static CPoint from_complex(Complex z1, Complex z2) { return {z1.real(), z1.imag(), z2.real(), z2.imag()}; }

  Complex z1() const { return {re1, im1}; }
  Complex z2() const { return {re2, im2}; }

  bool finite() const {
    return std::isfinite(re1) && std::isfinite(im1) && std::isfinite(re2) && std::isfinite(im2);
  }
};

/// A direction in C^2; same layout as CPoint.
struct CVector {
  Real re1 = 0, im1 = 0, re2 = 0, im2 = 0;

  static CVector from_complex(Complex v1, Complex v2) { return {v1.real(), v1.imag(), v2.real(), v2.imag()}; }

  Complex v1() const { return {re1, im1}; }
  Complex v2() const { return {re2, im2}; }

  Real norm() const { return std::sqrt(re1 * re1 + im1 * im1 + re2 * re2 + im2 * im2); }

  CVector normalized() const {
    const Real n = norm();
    return {re1 / n, im1 / n, re2 / n, im2 / n};
  }
};

inline CVector operator*(Real s, const CVector& v) { return {s * v.re1, s * v.im1, s * v.re2, s * v.im2}; }
inline CVector operator*(Complex a, const CVector& v) { return CVector::from_complex(a * v.v1(), a * v.v2()); }
inline CVector operator+(const CVector& a, const CVector& b) {
  return {a.re1 + b.re1, a.im1 + b.im1, a.re2 + b.re2, a.im2 + b.im2};
}
inline CVector operator-(const CVector& a, const CVector& b) {
  return {a.re1 - b.re1, a.im1 - b.im1, a.re2 - b.re2, a.im2 - b.im2};
}
inline CPoint operator+(const CPoint& p, const CVector& v) {
  return {p.re1 + v.re1, p.im1 + v.im1, p.re2 + v.re2, p.im2 + v.im2};
}
inline CPoint operator-(const CPoint& p, const CVector& v) {
  return {p.re1 - v.re1, p.im1 - v.im1, p.re2 - v.re2, p.im2 - v.im2};
}
inline CVector operator-(const CPoint& a, const CPoint& b) {
  return {a.re1 - b.re1, a.im1 - b.im1, a.re2 - b.re2, a.im2 - b.im2};
}

/// Hermitian product <a, b> = a1 conj(b1) + a2 conj(b2).
inline Complex hermitian(const CVector& a, const CVector& b) {
  return a.v1() * std::conj(b.v1()) + a.v2() * std::conj(b.v2());
}

inline Real distance(const CPoint& a, const CPoint& b) { return (a - b).norm(); }

inline CPoint midpoint(const CPoint& a, const CPoint& b) {
  return {(a.re1 + b.re1) / 2, (a.im1 + b.im1) / 2, (a.re2 + b.re2) / 2, (a.im2 + b.im2) / 2};
}

}  // namespace kobvis
