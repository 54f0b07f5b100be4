#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/partial_density.hpp"
#include "qrec/random.hpp"

using namespace qrec;

TEST(PartialDensity, AcceptsValidOperators) {
  const auto f = new_partial_density(ComplexMatrix::diagonal({0.5, 0.25}));
  EXPECT_DOUBLE_EQ(f.trace(), 0.75);
  EXPECT_DOUBLE_EQ(nontermination_probability(f), 0.25);
  EXPECT_EQ(PartialDensityOperator::zero(3).trace(), 0.0);
  EXPECT_DOUBLE_EQ(nontermination_probability(PartialDensityOperator::zero(3)), 1.0);
  EXPECT_DOUBLE_EQ(PartialDensityOperator::basis_state(4, 2).trace(), 1.0);
}

TEST(PartialDensity, RejectsTraceAboveOne) {
  try {
    new_partial_density(ComplexMatrix::diagonal({0.7, 0.7}));
    FAIL() << "expected TraceError";
  } catch (const TraceError& e) {
    EXPECT_NEAR(e.trace(), 1.4, 1e-15);
  }
}

TEST(PartialDensity, RejectsNegativeEigenvalueWithWitness) {
  try {
    new_partial_density(ComplexMatrix::diagonal({0.5, -0.1}));
    FAIL() << "expected NotPositiveError";
  } catch (const NotPositiveError& e) {
    EXPECT_NEAR(e.min_eigenvalue(), -0.1, 1e-15);
    ASSERT_EQ(e.witness().size(), 2u);
    EXPECT_NEAR(std::abs(e.witness()[1]), 1.0, 1e-14);
  }
}

TEST(PartialDensity, RejectsNonHermitian) {
  ComplexMatrix m{{0.5, 0.1}, {0.0, 0.2}};
  EXPECT_THROW(new_partial_density(m), NotHermitianError);
}

TEST(PartialDensity, RepairClampsTinyNegatives) {
  const auto m = ComplexMatrix::diagonal({0.5, -5e-10});
  const PartialDensityOperator f(m, {}, Validation::repair);
  EXPECT_GE(f.matrix()(1, 1).real(), 0.0);
  EXPECT_THROW(PartialDensityOperator(ComplexMatrix::diagonal({0.5, -1e-3}), {}, Validation::repair),
               NotPositiveError);
}

TEST(PartialDensity, Scaling) {
  const auto f = new_partial_density(ComplexMatrix::diagonal({0.5, 0.5}));
  EXPECT_DOUBLE_EQ(scale(f, 0.5).trace(), 0.5);
  EXPECT_THROW(scale(f, 1.5), Error);
  EXPECT_THROW(scale(f, -0.1), Error);
}

TEST(PartialDensity, PureState) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto f = PartialDensityOperator::pure({r, Complex(0, r)});
  EXPECT_NEAR(f.trace(), 1.0, 1e-15);
  EXPECT_NEAR(f.matrix()(0, 1).imag(), -0.5, 1e-15);
}

TEST(LoewnerOrder, ExamplesAndWitness) {
  const auto f = new_partial_density(ComplexMatrix::diagonal({0.25, 0.0}));
  const auto g = new_partial_density(ComplexMatrix::diagonal({0.5, 0.25}));
  EXPECT_TRUE(loewner_leq(f, g).leq);
  EXPECT_TRUE(loewner_leq(PartialDensityOperator::zero(2), f).leq);
  const auto back = loewner_leq(g, f);
  EXPECT_FALSE(back.leq);
  ASSERT_TRUE(back.witness.has_value());
  // the witness is a direction where f - g is negative
  const auto d = f.matrix() - g.matrix();
  EXPECT_LT(inner(*back.witness, qrec::apply(d, *back.witness)).real(), 0.0);
  EXPECT_THROW(loewner_leq(f, PartialDensityOperator::zero(3)), DimensionError);
}

TEST(LoewnerOrder, IncomparablePair) {
  const auto f = new_partial_density(ComplexMatrix::diagonal({0.5, 0.0}));
  const auto g = new_partial_density(ComplexMatrix::diagonal({0.0, 0.5}));
  EXPECT_FALSE(loewner_leq(f, g).leq);
  EXPECT_FALSE(loewner_leq(g, f).leq);
}

TEST(Dyadic, TraceIsBinaryExpansion) {
  const std::vector<int> bits{1, 0, 1, 1};
  const auto f = dyadic_diagonal_state(bits, 4);
  EXPECT_DOUBLE_EQ(f.trace(), 0.5 + 0.125 + 0.0625);
  EXPECT_DOUBLE_EQ(f.matrix()(1, 1).real(), 0.0);
  const std::vector<int> bad{1, 2};
  EXPECT_THROW(dyadic_diagonal_state(bad, 2), Error);
  EXPECT_THROW(dyadic_diagonal_state(bits, 3), Error);
}

TEST(Dyadic, PrefixesFormAChain) {
  const std::vector<int> bits{1, 1, 0, 1, 0, 1};
  std::vector<PartialDensityOperator> chain;
  for (std::size_t k = 0; k <= bits.size(); ++k)
    chain.push_back(dyadic_diagonal_state(std::span<const int>(bits.data(), k), bits.size()));
  for (std::size_t k = 1; k < chain.size(); ++k) EXPECT_TRUE(loewner_leq(chain[k - 1], chain[k]).leq);

  // a zero digit is a zero trace gap, which ends the walk on its own
  const auto early = chain_supremum(chain, FixpointConfig{});
  EXPECT_TRUE(early.converged);
  EXPECT_EQ(early.iterations, 3u);
  EXPECT_DOUBLE_EQ(early.value.trace(), 0.75);

  // a producer that knows more digits follow can veto the stop
  std::size_t i = 0;
  auto next = [&]() -> std::optional<PartialDensityOperator> {
    if (i >= chain.size()) return std::nullopt;
    return chain[i++];
  };
  const auto full = chain_supremum(next, FixpointConfig{}, Tolerances{}, [&] { return i >= chain.size(); });
  EXPECT_LT(max_abs_diff(full.value.matrix(), chain.back().matrix()), 1e-15);
  EXPECT_DOUBLE_EQ(full.value.trace(), 0.5 + 0.25 + 0.0625 + 0.015625);
}

TEST(ChainSupremum, GeometricChainConverges) {
  Sampler rng(21);
  const auto f = new_partial_density(rng.partial_density_matrix(3));
  std::size_t n = 0;
  auto next = [&]() -> std::optional<PartialDensityOperator> {
    return f.scaled(1.0 - std::ldexp(1.0, -static_cast<int>(n++)));
  };
  FixpointConfig cfg;
  cfg.trace_tol = 1e-12;
  const auto sup = chain_supremum(next, cfg);
  EXPECT_TRUE(sup.converged);
  EXPECT_LT(max_abs_diff(sup.value.matrix(), f.matrix()), 1e-11);
  ASSERT_GE(sup.trace_log.size(), 2u);
  for (std::size_t i = 1; i < sup.trace_log.size(); ++i) EXPECT_GE(sup.trace_log[i], sup.trace_log[i - 1]);
}

TEST(ChainSupremum, IterationCapReportsNonConvergence) {
  std::size_t n = 0;
  auto next = [&]() -> std::optional<PartialDensityOperator> {
    const double t = 1.0 - 1.0 / static_cast<double>(++n);
    return new_partial_density(ComplexMatrix::diagonal({t}));
  };
  FixpointConfig cfg;
  cfg.max_iterations = 20;
  cfg.trace_tol = 1e-9;
  const auto sup = chain_supremum(next, cfg);
  EXPECT_FALSE(sup.converged);
  EXPECT_EQ(sup.iterations, 20u);
}

TEST(ChainSupremum, MonotonicityViolationCarriesIndexAndWitness) {
  std::vector<PartialDensityOperator> chain{
      new_partial_density(ComplexMatrix::diagonal({0.1, 0.0})),
      new_partial_density(ComplexMatrix::diagonal({0.2, 0.0})),
      new_partial_density(ComplexMatrix::diagonal({0.0, 0.5})),
  };
  try {
    chain_supremum(chain, FixpointConfig{});
    FAIL() << "expected MonotonicityError";
  } catch (const MonotonicityError& e) {
    EXPECT_EQ(e.index(), 2u);
    ASSERT_EQ(e.witness().size(), 2u);
    EXPECT_NEAR(std::abs(e.witness()[0]), 1.0, 1e-14);
  }
  FixpointConfig off;
  off.monotonicity_check = false;
  EXPECT_NO_THROW(chain_supremum(chain, off));
}

TEST(ChainSupremum, SettledPredicateDelaysStop) {
  // traces 0, 0, 0, 0.5: a zero gap early must not end the chain while
  // the producer says more is coming
  std::vector<double> traces{0.0, 0.0, 0.0, 0.5, 0.5};
  std::size_t i = 0;
  auto next = [&]() -> std::optional<PartialDensityOperator> {
    if (i >= traces.size()) return std::nullopt;
    return new_partial_density(ComplexMatrix::diagonal({traces[i++]}));
  };
  auto settled = [&]() { return i >= 4; };
  const auto sup = chain_supremum(next, FixpointConfig{}, Tolerances{}, settled);
  EXPECT_TRUE(sup.converged);
  EXPECT_DOUBLE_EQ(sup.value.trace(), 0.5);
}

TEST(ChainSupremum, ErrorPaths) {
  std::vector<PartialDensityOperator> none;
  EXPECT_THROW(chain_supremum(none, FixpointConfig{}), Error);
  FixpointConfig bad;
  bad.trace_tol = 0.0;
  std::vector<PartialDensityOperator> one{PartialDensityOperator::zero(2)};
  EXPECT_THROW(chain_supremum(one, bad), Error);
  bad = {};
  bad.max_iterations = 0;
  EXPECT_THROW(chain_supremum(one, bad), Error);
  std::vector<PartialDensityOperator> mixed{PartialDensityOperator::zero(2), PartialDensityOperator::zero(3)};
  EXPECT_THROW(chain_supremum(mixed, FixpointConfig{}), DimensionError);
}
