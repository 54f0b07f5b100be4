#pragma once

// Seeded generators for the random objects the property suites draw:
// Gaussian vectors, Householder unitaries, Hermitian matrices, partial
// density matrices and subspace bases.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qrec/linalg.hpp"

namespace qrec {

/// Mixes a base seed with stream indices so each trial gets its own stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  double gaussian() { return normal_(rng_); }

  Vector gaussian_vector(std::size_t n) {
    Vector v(n);
    for (auto& x : v) x = Complex(gaussian(), gaussian());
    return v;
  }

  Vector unit_vector(std::size_t n) {
    Vector v = gaussian_vector(n);
    const double len = norm(v);
    for (auto& x : v) x /= len;
    return v;
  }

  /// Product of n Householder reflections times a random diagonal phase.
  ComplexMatrix unitary(std::size_t n) {
    ComplexMatrix u = ComplexMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Vector w = unit_vector(n);
      // u <- u (I - 2 w w^H)
      for (std::size_t r = 0; r < n; ++r) {
        Complex uw{};
        for (std::size_t c = 0; c < n; ++c) uw += u(r, c) * w[c];
        for (std::size_t c = 0; c < n; ++c) u(r, c) -= 2.0 * uw * std::conj(w[c]);
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      const Complex phase = std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi));
      for (std::size_t r = 0; r < n; ++r) u(r, c) *= phase;
    }
    return u;
  }

  /// (G + G^H)/2 with standard Gaussian complex G, scaled by `scale`.
  ComplexMatrix hermitian(std::size_t n, double scale = 1.0) {
    ComplexMatrix g(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) g(r, c) = Complex(gaussian(), gaussian());
    ComplexMatrix h = (g + adjoint(g)) * Complex(0.5 * scale);
    for (std::size_t i = 0; i < n; ++i) h(i, i) = h(i, i).real();
    return h;
  }

  /// U diag(values) U^H for a random unitary U.
  ComplexMatrix with_spectrum(const std::vector<double>& values) {
    const ComplexMatrix u = unitary(values.size());
    return conjugate(u, ComplexMatrix::diagonal(values));
  }

  /// Random positive matrix of random rank with exactly the given trace.
  ComplexMatrix positive_with_trace(std::size_t n, double tr) {
    const std::size_t rank = index(1, n);
    std::vector<double> weights(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rank; ++i) {
      weights[i] = uniform(0.05, 1.0);
      total += weights[i];
    }
    for (auto& w : weights) w *= tr / total;
    ComplexMatrix m = with_spectrum(weights);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = m(i, i).real();
    return m;
  }

  /// Trace drawn uniformly from [0, 1).
  ComplexMatrix partial_density_matrix(std::size_t n) {
    return positive_with_trace(n, uniform(0.0, 1.0));
  }

  /// Orthonormal basis of a random subspace of the given rank.
  std::vector<Vector> subspace_basis(std::size_t n, std::size_t rank) {
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < rank; ++i) vs.push_back(gaussian_vector(n));
    return orthonormalize(vs, 1e-8);
  }

  std::mt19937_64& engine() noexcept { return rng_; }

  static ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& a) {
    return mat_mul(mat_mul(u, a), adjoint(u));
  }

private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qrec
