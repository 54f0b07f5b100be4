#pragma once

// Partial density operators: positive matrices with trace in [0, 1], ordered
// by the Loewner order. Increasing chains of them have suprema; a chain is
// consumed one element at a time and stopped on the trace gap.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/linalg.hpp"

namespace qrec {

enum class Validation { reject, repair };

class PartialDensityOperator {
public:
  /// Validates `m`. With Validation::repair, eigenvalues in [-psd_tol, 0) are
  /// clamped to zero; anything more negative is still rejected.
  explicit PartialDensityOperator(const ComplexMatrix& m, const Tolerances& tol = {},
                                  Validation mode = Validation::reject) {
    require_hermitian(m, tol);
    ComplexMatrix h = (m + adjoint(m)) * Complex(0.5);
    if (h.dim() > 0) {
      auto eig = hermitian_eig(h, tol);
      const double lowest = eig.eigenvalues.front();
      if (lowest < -tol.psd) throw NotPositiveError(lowest, eig.eigenvector(0));
      if (mode == Validation::repair && lowest < 0.0) {
        for (auto& l : eig.eigenvalues) l = std::max(l, 0.0);
        h = eig.reconstruct();
      }
    }
    matrix_ = std::move(h);
    trace_ = qrec::trace(matrix_).real();
    if (trace_ > 1.0 + tol.psd) throw TraceError(trace_);
  }

  static PartialDensityOperator zero(std::size_t n) {
    return unchecked(ComplexMatrix::zero(n));
  }

  /// |psi><psi| for a unit vector psi.
  static PartialDensityOperator pure(const Vector& psi, const Tolerances& tol = {}) {
    return PartialDensityOperator(ComplexMatrix::outer(psi, psi), tol);
  }

  /// |k><k| for computational basis state k of dimension n.
  static PartialDensityOperator basis_state(std::size_t n, std::size_t k) {
    ComplexMatrix m(n);
    m(k, k) = 1.0;
    return unchecked(std::move(m));
  }

  std::size_t dim() const noexcept { return matrix_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  double trace() const noexcept { return trace_; }

  /// r f for r in [0, 1]; the result needs no revalidation.
  PartialDensityOperator scaled(double r) const {
    if (!(r >= 0.0 && r <= 1.0))
      throw Error("scale factor " + std::to_string(r) + " outside [0, 1]");
    return unchecked(matrix_ * Complex(r));
  }

private:
  static PartialDensityOperator unchecked(ComplexMatrix m) {
    PartialDensityOperator f;
    f.trace_ = qrec::trace(m).real();
    f.matrix_ = std::move(m);
    return f;
  }

  PartialDensityOperator() = default;

  ComplexMatrix matrix_;
  double trace_ = 0.0;
};

inline PartialDensityOperator new_partial_density(const ComplexMatrix& m,
                                                  const Tolerances& tol = {}) {
  return PartialDensityOperator(m, tol);
}

inline PartialDensityOperator scale(const PartialDensityOperator& f, double r) {
  return f.scaled(r);
}

struct LoewnerCheck {
  bool leq = true;
  std::optional<Vector> witness;  // unit x with <x|(g - f)x> < 0 when !leq

  explicit operator bool() const noexcept { return leq; }
};

/// f <= g iff g - f is positive semidefinite.
inline LoewnerCheck loewner_leq(const PartialDensityOperator& f,
                                const PartialDensityOperator& g,
                                const Tolerances& tol = {}) {
  if (f.dim() != g.dim()) throw DimensionError(f.dim(), g.dim());
  auto psd = is_positive_semidefinite(g.matrix() - f.matrix(), tol);
  return {psd.positive, std::move(psd.witness)};
}

/// 1 - tr(f), clamped to [0, 1].
inline double nontermination_probability(const PartialDensityOperator& f) {
  return std::clamp(1.0 - f.trace(), 0.0, 1.0);
}

/// Diagonal operator with entry bits[i] / 2^(i+1) at position i; its trace is
/// the truncated binary expansion 0.b0 b1 b2 ...
inline PartialDensityOperator dyadic_diagonal_state(std::span<const int> bits,
                                                    std::size_t dim) {
  if (bits.size() > dim)
    throw Error("dyadic state needs " + std::to_string(bits.size()) +
                " basis vectors but dimension is " + std::to_string(dim));
  std::vector<double> diag(dim, 0.0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw Error("dyadic digits must be 0 or 1");
    diag[i] = bits[i] ? std::ldexp(1.0, -static_cast<int>(i + 1)) : 0.0;
  }
  return PartialDensityOperator(ComplexMatrix::diagonal(diag));
}

struct FixpointConfig {
  std::size_t max_iterations = 10000;
  double trace_tol = 1e-9;
  bool monotonicity_check = true;

  void validate() const {
    if (max_iterations < 1) throw Error("max_iterations must be >= 1");
    if (!(trace_tol > 0.0)) throw Error("trace_tol must be positive");
  }
};

struct ChainSupremum {
  PartialDensityOperator value;
  std::size_t iterations = 0;   // successors pulled from the chain
  bool converged = false;
  std::vector<double> trace_log;  // trace of every element pulled, in order
};

namespace detail {
struct AlwaysSettled {
  bool operator()() const noexcept { return true; }
};
}  // namespace detail

/// Supremum of an increasing chain produced by `next()`, which returns the
/// following element or std::nullopt when a finite chain is exhausted.
///
/// The chain stops at the first successor whose trace gain is below
/// cfg.trace_tol; for an increasing chain tr(f_{n+1} - f_n) bounds the
/// operator norm of the step. `settled()` is consulted before stopping and
/// may veto when the producer knows more mass is still to come (a loop whose
/// body has not yet reached its exit). Hitting max_iterations returns the last
/// element with converged = false.
template <class Next, class Settled = detail::AlwaysSettled>
  requires std::invocable<Next&>
ChainSupremum chain_supremum(Next&& next, const FixpointConfig& cfg,
                             const Tolerances& tol = {}, Settled settled = {}) {
  cfg.validate();
  std::optional<PartialDensityOperator> first = next();
  if (!first) throw Error("chain_supremum: empty chain");

  ChainSupremum out{std::move(*first), 0, false, {}};
  out.trace_log.push_back(out.value.trace());

  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    std::optional<PartialDensityOperator> succ = next();
    if (!succ) {
      out.converged = true;
      return out;
    }
    if (succ->dim() != out.value.dim())
      throw DimensionError(out.value.dim(), succ->dim());
    if (cfg.monotonicity_check) {
      auto check = loewner_leq(out.value, *succ, tol);
      if (!check) throw MonotonicityError(it, std::move(*check.witness));
    }
    const double gap = succ->trace() - out.value.trace();
    out.trace_log.push_back(succ->trace());
    out.value = std::move(*succ);
    out.iterations = it;
    if (gap < cfg.trace_tol && settled()) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

/// Convenience overload for a finite, fully materialized chain.
inline ChainSupremum chain_supremum(std::span<const PartialDensityOperator> chain,
                                    const FixpointConfig& cfg,
                                    const Tolerances& tol = {}) {
  std::size_t i = 0;
  return chain_supremum(
      [&]() -> std::optional<PartialDensityOperator> {
        if (i >= chain.size()) return std::nullopt;
        return chain[i++];
      },
      cfg, tol);
}

}  // namespace qrec
