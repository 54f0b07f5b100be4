#pragma once

// The lattice of closed subspaces (quantum events) and the measure
// K -> tr(P_K f) induced by a partial density operator f.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/linalg.hpp"
#include "qrec/partial_density.hpp"
#include "qrec/random.hpp"

namespace qrec {

/// A closed subspace of C^n held as its orthogonal projection together with
/// an orthonormal basis of its range.
class ClosedSubspace {
public:
  /// Span of arbitrary vectors of dimension n. An empty list gives {0}.
  static ClosedSubspace from_vectors(std::span<const Vector> vectors, std::size_t n,
                                     const Tolerances& tol = {}) {
    for (const auto& v : vectors)
      if (v.size() != n) throw DimensionError(n, v.size());
    return from_orthonormal(orthonormalize(vectors, tol.rank), n);
  }

  /// Takes ownership of a basis that is already orthonormal.
  static ClosedSubspace from_orthonormal(std::vector<Vector> basis, std::size_t n) {
    ClosedSubspace k;
    k.projection_ = ComplexMatrix(n);
    for (const auto& b : basis) {
      if (b.size() != n) throw DimensionError(n, b.size());
      k.projection_ += ComplexMatrix::outer(b, b);
    }
    k.basis_ = std::move(basis);
    return k;
  }

  /// Validates a projection matrix (Hermitian and idempotent).
  static ClosedSubspace from_projection(const ComplexMatrix& p, const Tolerances& tol = {}) {
    require_hermitian(p, tol);
    const double idem = max_abs_diff(mat_mul(p, p), p);
    if (idem > tol.projection)
      throw Error("matrix is not a projection (max |P^2 - P| = " +
                  std::to_string(idem) + ")");
    const auto eig = hermitian_eig(p, tol);
    std::vector<Vector> basis;
    for (std::size_t j = 0; j < eig.eigenvalues.size(); ++j)
      if (eig.eigenvalues[j] > 0.5) basis.push_back(eig.eigenvector(j));
    ClosedSubspace k;
    k.projection_ = (p + adjoint(p)) * Complex(0.5);
    k.basis_ = std::move(basis);
    return k;
  }

  static ClosedSubspace zero(std::size_t n) { return from_orthonormal({}, n); }

  static ClosedSubspace whole(std::size_t n) {
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < n; ++i) basis.push_back(unit(n, i));
    return from_orthonormal(std::move(basis), n);
  }

  /// span{e_i}
  static ClosedSubspace basis_ray(std::size_t n, std::size_t i) {
    return from_orthonormal({unit(n, i)}, n);
  }

  std::size_t dim() const noexcept { return projection_.dim(); }
  std::size_t rank() const noexcept { return basis_.size(); }
  const ComplexMatrix& projection() const noexcept { return projection_; }
  const std::vector<Vector>& basis() const noexcept { return basis_; }

  /// P x = x within tol for unit x.
  bool contains(const Vector& x, double tol) const {
    const Vector px = apply(projection_, x);
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(px[i] - x[i]));
    return d <= tol;
  }

  /// this is a subspace of other: P_other P_this = P_this.
  bool is_subspace_of(const ClosedSubspace& other, double tol) const {
    return max_abs_diff(mat_mul(other.projection_, projection_), projection_) <= tol;
  }

  static Vector unit(std::size_t n, std::size_t i) {
    Vector e(n);
    e.at(i) = 1.0;
    return e;
  }

private:
  ClosedSubspace() = default;

  ComplexMatrix projection_;
  std::vector<Vector> basis_;
};

inline ClosedSubspace subspace_from_vectors(std::span<const Vector> vectors, std::size_t n,
                                            const Tolerances& tol = {}) {
  return ClosedSubspace::from_vectors(vectors, n, tol);
}

inline ClosedSubspace join(const ClosedSubspace& a, const ClosedSubspace& b,
                           const Tolerances& tol = {}) {
  if (a.dim() != b.dim()) throw DimensionError(a.dim(), b.dim());
  std::vector<Vector> all = a.basis();
  all.insert(all.end(), b.basis().begin(), b.basis().end());
  return ClosedSubspace::from_vectors(all, a.dim(), tol);
}

/// I - P. The basis is completed from the standard basis.
inline ClosedSubspace orthocomplement(const ClosedSubspace& k, const Tolerances& tol = {}) {
  const std::size_t n = k.dim();
  std::vector<Vector> all = k.basis();
  for (std::size_t i = 0; i < n; ++i) all.push_back(ClosedSubspace::unit(n, i));
  auto full = orthonormalize(all, tol.rank);
  std::vector<Vector> rest(full.begin() + static_cast<std::ptrdiff_t>(k.rank()), full.end());
  return ClosedSubspace::from_orthonormal(std::move(rest), n);
}

/// A ^ B = (A' v B')'
inline ClosedSubspace meet(const ClosedSubspace& a, const ClosedSubspace& b,
                           const Tolerances& tol = {}) {
  if (a.dim() != b.dim()) throw DimensionError(a.dim(), b.dim());
  return orthocomplement(join(orthocomplement(a, tol), orthocomplement(b, tol), tol), tol);
}

inline bool are_orthogonal(const ClosedSubspace& a, const ClosedSubspace& b,
                           const Tolerances& tol = {}) {
  if (a.dim() != b.dim()) throw DimensionError(a.dim(), b.dim());
  return mat_mul(a.projection(), b.projection()).max_abs() <= tol.projection;
}

/// tr(P_K f): the probability the partial state G(f) assigns to the event K.
inline double gleason_measure(const PartialDensityOperator& f, const ClosedSubspace& k,
                              const Tolerances& tol = {}) {
  if (f.dim() != k.dim()) throw DimensionError(f.dim(), k.dim());
  const Complex t = trace_of_product(k.projection(), f.matrix());
  if (std::abs(t.imag()) > 1e-9)
    throw Error("tr(P f) has imaginary part " + std::to_string(t.imag()));
  double v = t.real();
  if (v < 0.0 && v >= -tol.psd) v = 0.0;
  if (v > 1.0 && v <= 1.0 + tol.psd) v = 1.0;
  return v;
}

/// The partial state G(f), evaluated lazily on events.
class PartialStateView {
public:
  explicit PartialStateView(PartialDensityOperator f, Tolerances tol = {})
      : source_(std::move(f)), tol_(tol) {}

  double operator()(const ClosedSubspace& k) const { return gleason_measure(source_, k, tol_); }
  double total() const { return (*this)(ClosedSubspace::whole(source_.dim())); }
  const PartialDensityOperator& source() const noexcept { return source_; }

private:
  PartialDensityOperator source_;
  Tolerances tol_;
};

/// Splits C^n into mutually orthogonal subspaces: a random unitary applied to
/// a random partition of the standard basis.
inline std::vector<ClosedSubspace> random_orthogonal_family(Sampler& rng, std::size_t n) {
  const ComplexMatrix u = rng.unitary(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng.engine());
  const std::size_t blocks = rng.index(1, n);
  std::vector<std::vector<Vector>> parts(blocks);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i < blocks ? i : rng.index(0, blocks - 1);
    parts[b].push_back(u.column(order[i]));
  }
  // Drop a random trailing block sometimes so the family need not cover H.
  if (blocks > 1 && rng.uniform() < 0.5) parts.pop_back();
  std::vector<ClosedSubspace> family;
  for (auto& p : parts) family.push_back(ClosedSubspace::from_orthonormal(std::move(p), n));
  return family;
}

inline ClosedSubspace random_subspace(Sampler& rng, std::size_t n, std::size_t rank) {
  return ClosedSubspace::from_orthonormal(rng.subspace_basis(n, rank), n);
}

struct AxiomReport {
  bool passed = true;
  std::size_t trials = 0;
  double worst_additivity_deviation = 0.0;
  double measure_of_zero = 0.0;    // p({0})
  double measure_of_whole = 0.0;   // p(H)
};

/// Checks p({0}) = 0, p(H) <= 1 and finite additivity over random families of
/// mutually orthogonal subspaces.
inline AxiomReport check_subprobability_axioms(const PartialDensityOperator& f,
                                               std::size_t trials, std::uint64_t seed,
                                               const Tolerances& tol = {}) {
  if (trials < 1) throw Error("trials must be >= 1");
  const std::size_t n = f.dim();
  AxiomReport r;
  r.trials = trials;
  r.measure_of_zero = gleason_measure(f, ClosedSubspace::zero(n), tol);
  r.measure_of_whole = gleason_measure(f, ClosedSubspace::whole(n), tol);
  Sampler rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto family = random_orthogonal_family(rng, n);
    ClosedSubspace joined = ClosedSubspace::zero(n);
    double sum = 0.0;
    for (const auto& k : family) {
      joined = join(joined, k, tol);
      sum += gleason_measure(f, k, tol);
    }
    const double dev = std::abs(gleason_measure(f, joined, tol) - sum);
    r.worst_additivity_deviation = std::max(r.worst_additivity_deviation, dev);
  }
  r.passed = r.measure_of_zero == 0.0 && r.measure_of_whole <= 1.0 + tol.psd &&
             r.worst_additivity_deviation <= 1e-8;
  return r;
}

struct StateOrder {
  bool leq = true;
  std::optional<ClosedSubspace> witness;  // event with G(f)(K) > G(g)(K)

  explicit operator bool() const noexcept { return leq; }
};

/// Decides G(f) <= G(g) pointwise on all events. The decision goes through
/// the operator order; a failure produces the ray spanned by a negative
/// direction of g - f, on which the measures are strictly reversed.
inline StateOrder state_leq(const PartialDensityOperator& f, const PartialDensityOperator& g,
                            const Tolerances& tol = {}) {
  auto check = loewner_leq(f, g, tol);
  if (check) return {};
  const Vector& x = *check.witness;
  return {false, ClosedSubspace::from_orthonormal({x}, f.dim())};
}

}  // namespace qrec
