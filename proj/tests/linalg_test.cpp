#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/linalg.hpp"
#include "qrec/random.hpp"

using namespace qrec;

namespace {

// plain triple loop, used as an oracle for mat_mul
ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

ComplexMatrix random_matrix(Sampler& rng, std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return m;
}

}  // namespace

TEST(ComplexMatrix, ConstructionAndAccess) {
  ComplexMatrix m{{1.0, Complex(0, 2)}, {3.0, 4.0}};
  EXPECT_EQ(m.dim(), 2u);
  EXPECT_EQ(m(0, 1), Complex(0, 2));
  EXPECT_EQ(m(1, 0), Complex(3, 0));
  EXPECT_THROW((ComplexMatrix{{1.0, 2.0}, {3.0}}), Error);
  EXPECT_THROW(ComplexMatrix(2, std::vector<Complex>(3)), Error);
}

TEST(ComplexMatrix, IdentityZeroDiagonal) {
  const auto i3 = ComplexMatrix::identity(3);
  EXPECT_EQ(trace(i3), Complex(3.0));
  EXPECT_EQ(ComplexMatrix::zero(3).max_abs(), 0.0);
  const auto d = ComplexMatrix::diagonal({1.0, -2.0, 0.5});
  EXPECT_EQ(d(1, 1), Complex(-2.0));
  EXPECT_EQ(d(0, 1), Complex(0.0));
}

TEST(ComplexMatrix, OuterProductConjugatesSecondFactor) {
  Vector u{Complex(1, 0), Complex(0, 1)};
  const auto m = ComplexMatrix::outer(u, u);
  EXPECT_EQ(m(0, 1), Complex(0, -1));
  EXPECT_EQ(m(1, 0), Complex(0, 1));
  EXPECT_NEAR(trace(m).real(), 2.0, 1e-15);
}

TEST(ComplexMatrix, ProductMatchesTripleLoop) {
  Sampler rng(7);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u}) {
    const auto a = random_matrix(rng, n), b = random_matrix(rng, n);
    EXPECT_LT(max_abs_diff(a * b, naive_product(a, b)), 1e-12) << "n=" << n;
  }
}

TEST(ComplexMatrix, DimensionMismatchThrows) {
  EXPECT_THROW(mat_mul(ComplexMatrix::identity(2), ComplexMatrix::identity(3)), DimensionError);
  auto a = ComplexMatrix::identity(2);
  EXPECT_THROW(a += ComplexMatrix::identity(3), DimensionError);
  EXPECT_THROW(qrec::apply(a, Vector(3)), DimensionError);
}

TEST(ComplexMatrix, TraceOfProductAgreesWithFullProduct) {
  Sampler rng(11);
  const auto a = random_matrix(rng, 6), b = random_matrix(rng, 6);
  EXPECT_LT(std::abs(trace_of_product(a, b) - trace(a * b)), 1e-12);
}

TEST(ComplexMatrix, AdjointAndHermitianDeviation) {
  ComplexMatrix m{{1.0, Complex(2, 1)}, {Complex(2, -1), 3.0}};
  EXPECT_EQ(hermitian_deviation(m), 0.0);
  EXPECT_NO_THROW(require_hermitian(m, {}));
  m(0, 1) += 1e-6;
  EXPECT_GT(hermitian_deviation(m), 1e-7);
  EXPECT_THROW(require_hermitian(m, {}), NotHermitianError);
  EXPECT_EQ(adjoint(adjoint(m))(0, 1), m(0, 1));
}

TEST(ComplexMatrix, NonFiniteEntriesAreDetected) {
  auto m = ComplexMatrix::identity(2);
  EXPECT_TRUE(m.is_finite());
  m(1, 0) = Complex(std::nan(""), 0.0);
  EXPECT_FALSE(m.is_finite());
}

TEST(Vectors, InnerAndNorm) {
  Vector u{Complex(0, 1), 1.0};
  Vector v{1.0, 1.0};
  EXPECT_EQ(inner(u, v), Complex(1, -1));  // conjugate-linear in the first slot
  EXPECT_NEAR(norm(u), std::sqrt(2.0), 1e-15);
}

TEST(HermitianEig, DiagonalInput) {
  const auto d = hermitian_eig(ComplexMatrix::diagonal({3.0, -1.0, 2.0}));
  ASSERT_EQ(d.eigenvalues.size(), 3u);
  EXPECT_DOUBLE_EQ(d.eigenvalues[0], -1.0);
  EXPECT_DOUBLE_EQ(d.eigenvalues[1], 2.0);
  EXPECT_DOUBLE_EQ(d.eigenvalues[2], 3.0);
}

TEST(HermitianEig, PauliY) {
  ComplexMatrix y{{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}};
  const auto d = hermitian_eig(y);
  EXPECT_NEAR(d.eigenvalues[0], -1.0, 1e-14);
  EXPECT_NEAR(d.eigenvalues[1], 1.0, 1e-14);
  const auto v = d.eigenvector(1);
  const auto yv = qrec::apply(y, v);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(std::abs(yv[i] - v[i]), 1e-13);
}

TEST(HermitianEig, RandomSpectraAreRecovered) {
  Sampler rng(3);
  for (std::size_t n : {2u, 3u, 4u, 7u, 12u, 16u}) {
    std::vector<double> spectrum(n);
    for (auto& s : spectrum) s = rng.uniform(-5.0, 5.0);
    const auto a = rng.with_spectrum(spectrum);
    const auto d = hermitian_eig(a);
    std::sort(spectrum.begin(), spectrum.end());
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(d.eigenvalues[i], spectrum[i], 1e-10) << "n=" << n;
    EXPECT_LT(max_abs_diff(d.reconstruct(), a), 1e-10);
    const auto& v = d.eigenvectors;
    EXPECT_LT(max_abs_diff(adjoint(v) * v, ComplexMatrix::identity(n)), 1e-10);
  }
}

TEST(HermitianEig, DegenerateSpectrum) {
  Sampler rng(5);
  const auto a = rng.with_spectrum({1.0, 1.0, 1.0, -2.0});
  const auto d = hermitian_eig(a);
  EXPECT_NEAR(d.eigenvalues[0], -2.0, 1e-12);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(d.eigenvalues[i], 1.0, 1e-12);
  EXPECT_LT(max_abs_diff(d.reconstruct(), a), 1e-11);
}

TEST(HermitianEig, RejectsNonHermitianAndNonFinite) {
  ComplexMatrix m{{1.0, 2.0}, {0.0, 1.0}};
  EXPECT_THROW(hermitian_eig(m), NotHermitianError);
  auto bad = ComplexMatrix::identity(2);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(hermitian_eig(bad), Error);
}

TEST(Orthonormalize, DropsDependentVectors) {
  std::vector<Vector> vs{{1.0, 1.0, 0.0}, {2.0, 2.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}};
  const auto q = orthonormalize(vs, 1e-8);
  ASSERT_EQ(q.size(), 2u);
  EXPECT_NEAR(norm(q[0]), 1.0, 1e-14);
  EXPECT_NEAR(norm(q[1]), 1.0, 1e-14);
  EXPECT_LT(std::abs(inner(q[0], q[1])), 1e-14);
}

TEST(Orthonormalize, NearlyParallelInputStaysOrthogonal) {
  std::vector<Vector> vs{{1.0, 0.0}, {1.0, 1e-6}};
  const auto q = orthonormalize(vs, 1e-8);
  ASSERT_EQ(q.size(), 2u);
  EXPECT_LT(std::abs(inner(q[0], q[1])), 1e-15);
}

TEST(PositiveSemidefinite, DecisionAndWitness) {
  EXPECT_TRUE(is_positive_semidefinite(ComplexMatrix::diagonal({0.0, 1.0})).positive);
  const auto c = is_positive_semidefinite(ComplexMatrix::diagonal({0.5, -0.25}));
  EXPECT_FALSE(c.positive);
  EXPECT_NEAR(c.min_eigenvalue, -0.25, 1e-15);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_NEAR(std::abs((*c.witness)[1]), 1.0, 1e-14);
  // within tolerance counts as positive
  EXPECT_TRUE(is_positive_semidefinite(ComplexMatrix::diagonal({1.0, -1e-12})).positive);
}

TEST(Sampler, Reproducible) {
  Sampler a(99), b(99);
  EXPECT_EQ(max_abs_diff(a.unitary(4), b.unitary(4)), 0.0);
  EXPECT_NE(mix_seed(1, 2, 3), mix_seed(1, 2, 4));
}

TEST(Sampler, UnitaryAndPartialDensity) {
  Sampler rng(17);
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    const auto u = rng.unitary(n);
    EXPECT_LT(max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(n)), 1e-12);
    const auto p = rng.partial_density_matrix(n);
    EXPECT_TRUE(is_positive_semidefinite(p).positive);
    EXPECT_LE(trace(p).real(), 1.0 + 1e-12);
  }
}
