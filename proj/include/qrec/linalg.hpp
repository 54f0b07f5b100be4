#pragma once

// Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.
// Dimensions here stay small (<= 64), so everything is a plain row-major
// std::vector and every operation returns a new value.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qrec/error.hpp"

namespace qrec {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Numerical thresholds shared by every module. The defaults are the
/// library-wide contract; callers override individual fields.
struct Tolerances {
  double hermitian = 1e-10;   // max |a - a^H| accepted as Hermitian
  double eig = 1e-9;          // eigensolver reconstruction/orthonormality
  double psd = 1e-9;          // smallest eigenvalue accepted as >= 0
  double rank = 1e-8;         // residual norm below which a vector is dependent
  double eig_group = 1e-8;    // eigenvalues closer than this share a projection
  double projection = 1e-9;   // idempotency / orthogonality of projections
};

class ComplexMatrix {
public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}

  ComplexMatrix(std::size_t n, std::vector<Complex> entries)
      : n_(n), a_(std::move(entries)) {
    if (a_.size() != n_ * n_) throw DimensionError(n_ * n_, a_.size());
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : n_(rows.size()) {
    a_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw DimensionError(n_, row.size());
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }

  static ComplexMatrix diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }

  /// |u><v|
  static ComplexMatrix outer(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw DimensionError(u.size(), v.size());
    ComplexMatrix m(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  std::size_t dim() const noexcept { return n_; }

  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return a_[r * n_ + c];
  }

  std::span<const Complex> entries() const noexcept { return a_; }

  Vector column(std::size_t c) const {
    Vector v(n_);
    for (std::size_t r = 0; r < n_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  /// Largest entry modulus.
  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
  }

  bool is_finite() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](const Complex& x) {
      return std::isfinite(x.real()) && std::isfinite(x.imag());
    });
  }

  void require_same(const ComplexMatrix& o) const {
    if (o.n_ != n_) throw DimensionError(n_, o.n_);
  }

private:
  std::size_t n_ = 0;
  std::vector<Complex> a_;
};

inline ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same(b);
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return mat_mul(a, b);
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(j, i) = std::conj(a(i, j));
  return h;
}

inline Complex trace(const ComplexMatrix& a) {
  Complex t{};
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

/// tr(a b) in O(n^2) without forming the product.
inline Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same(b);
  Complex t{};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
  return t;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).max_abs();
}

/// max |a - a^H|
inline double hermitian_deviation(const ComplexMatrix& a) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j)
      d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
  return d;
}

inline void require_hermitian(const ComplexMatrix& a, const Tolerances& tol) {
  if (!a.is_finite()) throw Error("matrix has non-finite entries");
  const double dev = hermitian_deviation(a);
  if (dev > tol.hermitian) throw NotHermitianError(dev);
}

inline Vector apply(const ComplexMatrix& a, const Vector& v) {
  if (v.size() != a.dim()) throw DimensionError(a.dim(), v.size());
  Vector w(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) w[i] += a(i, j) * v[j];
  return w;
}

/// <u|v>, antilinear in the first argument.
inline Complex inner(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw DimensionError(u.size(), v.size());
  Complex s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

inline double norm(const Vector& v) { return std::sqrt(std::real(inner(v, v))); }

struct SpectralDecomposition {
  std::vector<double> eigenvalues;   // ascending
  ComplexMatrix eigenvectors;        // column j belongs to eigenvalues[j]

  Vector eigenvector(std::size_t j) const { return eigenvectors.column(j); }

  /// V diag(lambda) V^H
  ComplexMatrix reconstruct() const {
    const std::size_t n = eigenvectors.dim();
    ComplexMatrix scaled = eigenvectors;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) scaled(r, c) *= eigenvalues[c];
    return mat_mul(scaled, adjoint(eigenvectors));
  }
};

namespace detail {

// Applies the 2x2 unitary J (acting on indices p, q) as a -> J^H a J and
// accumulates v -> v J.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p,
                          std::size_t q, Complex jpp, Complex jpq, Complex jqp,
                          Complex jqq) {
  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
}

}  // namespace detail

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Each rotation first
/// removes the phase of a(p,q), then applies the real symmetric rotation that
/// annihilates it. Output is sorted ascending and deterministic.
inline SpectralDecomposition hermitian_eig(const ComplexMatrix& input,
                                           const Tolerances& tol = {},
                                           int max_sweeps = 100) {
  require_hermitian(input, tol);
  const std::size_t n = input.dim();

  ComplexMatrix a = (input + adjoint(input)) * Complex(0.5);
  ComplexMatrix v = ComplexMatrix::identity(n);

  double frob2 = 0.0;
  for (const auto& x : a.entries()) frob2 += std::norm(x);
  const double threshold =
      std::numeric_limits<double>::epsilon() * std::sqrt(frob2);

  bool done = n <= 1;
  for (int sweep = 0; sweep < max_sweeps && !done; ++sweep) {
    done = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= threshold || mag == 0.0) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        done = false;
        const Complex phase = std::conj(apq) / mag;  // e^{-i arg a_pq}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        detail::jacobi_rotate(a, v, p, q, c, s, -s * phase, c * phase);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!done) throw ConvergenceError("Jacobi eigensolver did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  SpectralDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
  }
  return out;
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Vectors whose
/// residual after projection has norm below rank_tol are dropped.
inline std::vector<Vector> orthonormalize(std::span<const Vector> vectors,
                                          double rank_tol) {
  std::vector<Vector> basis;
  if (vectors.empty()) return basis;
  const std::size_t n = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != n) throw DimensionError(n, v.size());
    Vector w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const Complex c = inner(q, w);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
    const double len = norm(w);
    if (len < rank_tol) continue;
    for (auto& x : w) x /= len;
    basis.push_back(std::move(w));
  }
  return basis;
}

struct PsdCheck {
  bool positive = true;
  double min_eigenvalue = 0.0;
  std::optional<Vector> witness;  // unit x with <x|a x> < 0 when !positive

  explicit operator bool() const noexcept { return positive; }
};

inline PsdCheck is_positive_semidefinite(const ComplexMatrix& a,
                                         const Tolerances& tol = {}) {
  if (a.dim() == 0) return {};
  const auto eig = hermitian_eig(a, tol);
  PsdCheck out;
  out.min_eigenvalue = eig.eigenvalues.front();
  if (out.min_eigenvalue < -tol.psd) {
    out.positive = false;
    out.witness = eig.eigenvector(0);
  }
  return out;
}

}  // namespace qrec
