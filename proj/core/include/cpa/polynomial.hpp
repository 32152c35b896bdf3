#pragma once

#include <complex>
#include <vector>

namespace cpa {

using Complex = std::complex<double>;

/// Real-coefficient polynomial, coefficients stored in ascending order of
/// degree. The zero polynomial has a single zero coefficient.
class RealPoly {
 public:
  RealPoly() : coeffs_{0.0} {}
  explicit RealPoly(std::vector<double> coeffs);

  static RealPoly constant(double c) { return RealPoly({c}); }

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;

  double operator()(double x) const;
  RealPoly derivative() const;

  RealPoly operator+(const RealPoly& o) const;
  RealPoly operator-(const RealPoly& o) const;
  RealPoly operator*(const RealPoly& o) const;
  RealPoly operator*(double s) const;

  /// x * p(x): shifts every coefficient up one degree.
  RealPoly times_x() const;

 private:
  std::vector<double> coeffs_;
};

/// Complex-coefficient polynomial in a real variable.
class ComplexPoly {
 public:
  ComplexPoly() : coeffs_{Complex(0.0)} {}
  explicit ComplexPoly(std::vector<Complex> coeffs);
  explicit ComplexPoly(const RealPoly& p);

  static ComplexPoly constant(Complex c) { return ComplexPoly(std::vector<Complex>{c}); }

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  Complex operator()(double x) const;
  Complex operator()(Complex x) const;

  ComplexPoly operator+(const ComplexPoly& o) const;
  ComplexPoly operator-(const ComplexPoly& o) const;
  ComplexPoly operator*(const ComplexPoly& o) const;
  ComplexPoly operator*(Complex s) const;

  /// Coefficient-wise conjugate; equals conj(p(x)) for real x.
  ComplexPoly conjugated() const;

  /// |p(x)|^2 as a real polynomial (p times its conjugate).
  RealPoly abs_squared() const;

 private:
  std::vector<Complex> coeffs_;
};

/// All complex roots via the eigenvalues of the companion matrix, after
/// trimming leading coefficients that are negligible relative to the largest
/// one. Throws RootFindingFailure when the eigensolver does not converge.
std::vector<Complex> companion_roots(const RealPoly& p);

/// Real roots of p: companion roots filtered by |Im| <= imag_tol * max(1, |Re|)
/// and polished with a few Newton steps. Sorted ascending, not deduplicated.
std::vector<double> real_roots(const RealPoly& p, double imag_tol = 1e-9);

}  // namespace cpa
