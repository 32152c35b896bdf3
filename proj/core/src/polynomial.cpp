#include "cpa/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "cpa/params.hpp"

namespace cpa {

namespace {

template <typename T>
void trim_trailing_zeros(std::vector<T>& c) {
  while (c.size() > 1 && c.back() == T(0)) c.pop_back();
}

}  // namespace

RealPoly::RealPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  trim_trailing_zeros(coeffs_);
}

bool RealPoly::is_zero() const {
  return coeffs_.size() == 1 && coeffs_[0] == 0.0;
}

double RealPoly::operator()(double x) const {
  double y = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) y = y * x + *it;
  return y;
}

RealPoly RealPoly::derivative() const {
  if (coeffs_.size() == 1) return RealPoly();
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return RealPoly(std::move(d));
}

RealPoly RealPoly::operator+(const RealPoly& o) const {
  std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return RealPoly(std::move(c));
}

RealPoly RealPoly::operator-(const RealPoly& o) const {
  std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] -= o.coeffs_[i];
  return RealPoly(std::move(c));
}

RealPoly RealPoly::operator*(const RealPoly& o) const {
  std::vector<double> c(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
  return RealPoly(std::move(c));
}

RealPoly RealPoly::operator*(double s) const {
  std::vector<double> c = coeffs_;
  for (auto& v : c) v *= s;
  return RealPoly(std::move(c));
}

RealPoly RealPoly::times_x() const {
  std::vector<double> c(coeffs_.size() + 1, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i + 1] = coeffs_[i];
  return RealPoly(std::move(c));
}

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(Complex(0.0));
  trim_trailing_zeros(coeffs_);
}

ComplexPoly::ComplexPoly(const RealPoly& p) {
  coeffs_.assign(p.coeffs().begin(), p.coeffs().end());
}

Complex ComplexPoly::operator()(double x) const { return (*this)(Complex(x)); }

Complex ComplexPoly::operator()(Complex x) const {
  Complex y = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) y = y * x + *it;
  return y;
}

ComplexPoly ComplexPoly::operator+(const ComplexPoly& o) const {
  std::vector<Complex> c(std::max(coeffs_.size(), o.coeffs_.size()), Complex(0.0));
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::operator-(const ComplexPoly& o) const {
  std::vector<Complex> c(std::max(coeffs_.size(), o.coeffs_.size()), Complex(0.0));
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] -= o.coeffs_[i];
  return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::operator*(const ComplexPoly& o) const {
  std::vector<Complex> c(coeffs_.size() + o.coeffs_.size() - 1, Complex(0.0));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
  return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::operator*(Complex s) const {
  std::vector<Complex> c = coeffs_;
  for (auto& v : c) v *= s;
  return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::conjugated() const {
  std::vector<Complex> c = coeffs_;
  for (auto& v : c) v = std::conj(v);
  return ComplexPoly(std::move(c));
}

RealPoly ComplexPoly::abs_squared() const {
  ComplexPoly sq = (*this) * conjugated();
  std::vector<double> c(sq.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = sq.coeffs()[i].real();
  return RealPoly(std::move(c));
}

std::vector<Complex> companion_roots(const RealPoly& p) {
  std::vector<double> c = p.coeffs();

  double max_abs = 0.0;
  for (double v : c) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) {
    throw RootFindingFailure("root finding on the zero polynomial");
  }

  std::vector<Complex> roots;

  // Factor out exact zero roots.
  size_t first_nonzero = 0;
  while (first_nonzero < c.size() - 1 && c[first_nonzero] == 0.0) ++first_nonzero;
  for (size_t i = 0; i < first_nonzero; ++i) roots.emplace_back(0.0);
  c.erase(c.begin(), c.begin() + first_nonzero);

  // Rescale the variable so the first and last retained coefficients are
  // comparable; the raw coefficients of a degree-7 system span tens of
  // orders of magnitude when the roots sit at large intensities.
  const int raw_degree = static_cast<int>(c.size()) - 1;
  double scale = 1.0;
  if (raw_degree >= 1 && c.back() != 0.0 && c.front() != 0.0) {
    scale = std::pow(std::abs(c.front() / c.back()), 1.0 / raw_degree);
    if (!std::isfinite(scale) || scale <= 0.0) scale = 1.0;
  }
  std::vector<double> s = c;
  double pw = 1.0;
  for (auto& v : s) {
    v *= pw;
    pw *= scale;
  }
  double s_max = 0.0;
  for (double v : s) s_max = std::max(s_max, std::abs(v));
  while (s.size() > 1 && std::abs(s.back()) < 1e-14 * s_max) s.pop_back();

  const int n = static_cast<int>(s.size()) - 1;
  if (n <= 0) return roots;
  if (n == 1) {
    roots.emplace_back(-s[0] / s[1] * scale);
    return roots;
  }

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -s[i] / s[n];

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw RootFindingFailure("companion-matrix eigensolver did not converge (degree " +
                             std::to_string(n) + ")");
  }
  for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()[i] * scale);
  return roots;
}

namespace {

// Backward-error bound: |p(x)| measured against the evaluation magnitude
// sum |c_k| |x|^k. Values above the bound are eigensolver artifacts, not
// roots.
double evaluation_scale(const RealPoly& p, double x) {
  double s = 0.0;
  double pw = 1.0;
  for (double v : p.coeffs()) {
    s += std::abs(v) * pw;
    pw *= std::abs(x);
  }
  return s;
}

}  // namespace

std::vector<double> real_roots(const RealPoly& p, double imag_tol) {
  std::vector<double> out;
  const RealPoly dp = p.derivative();
  for (const Complex& z : companion_roots(p)) {
    if (std::abs(z.imag()) > imag_tol * std::max(1.0, std::abs(z.real()))) continue;
    double x = z.real();
    for (int it = 0; it < 60; ++it) {
      const double f = p(x);
      const double d = dp(x);
      if (d == 0.0) break;
      const double step = f / d;
      if (!std::isfinite(step)) break;
      const double xn = x - step;
      if (std::abs(p(xn)) >= std::abs(f)) break;
      x = xn;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    if (std::abs(p(x)) > 1e-9 * evaluation_scale(p, x)) continue;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cpa
