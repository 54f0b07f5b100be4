#pragma once

// Bounded observables as Hermitian matrices with their projection-valued
// measures, and the interval-valued expectation with respect to a partial
// density operator:
//
//   E(A | f) = tr(A f) + (1 - tr f) [min Spec A, max Spec A]
//
// The missing mass 1 - tr f is known to land somewhere in the spectrum; the
// interval records every place it could go.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/intervals.hpp"
#include "qrec/linalg.hpp"
#include "qrec/partial_density.hpp"
#include "qrec/quantum_logic.hpp"

namespace qrec {

/// A finite union of pairwise disjoint real intervals; endpoints may be
/// infinite and each is independently open or closed.
class BorelSet {
public:
  struct Piece {
    double lo;
    double hi;
    bool lo_closed = true;
    bool hi_closed = true;

    bool contains(double x) const noexcept {
      const bool above = lo_closed ? x >= lo : x > lo;
      const bool below = hi_closed ? x <= hi : x < hi;
      return above && below;
    }
  };

  BorelSet() = default;

  explicit BorelSet(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (std::isnan(p.lo) || std::isnan(p.hi) || p.lo > p.hi)
        throw Error("Borel piece has invalid endpoints");
      if (i > 0 && overlaps(pieces_[i - 1], p))
        throw Error("Borel pieces must be pairwise disjoint");
    }
  }

  static BorelSet empty() { return {}; }

  static BorelSet real_line() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return BorelSet({{-inf, inf, false, false}});
  }

  static BorelSet closed(double lo, double hi) { return BorelSet({{lo, hi, true, true}}); }
  static BorelSet point(double x) { return closed(x, x); }

  bool contains(double x) const noexcept {
    return std::any_of(pieces_.begin(), pieces_.end(),
                       [x](const Piece& p) { return p.contains(x); });
  }

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  /// Union of two sets, merging pieces that touch or overlap.
  friend BorelSet unite(const BorelSet& a, const BorelSet& b) {
    std::vector<Piece> all = a.pieces_;
    all.insert(all.end(), b.pieces_.begin(), b.pieces_.end());
    std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) {
      return x.lo < y.lo || (x.lo == y.lo && x.lo_closed && !y.lo_closed);
    });
    std::vector<Piece> merged;
    for (const auto& p : all) {
      if (!merged.empty() && touches(merged.back(), p)) {
        auto& m = merged.back();
        if (p.hi > m.hi || (p.hi == m.hi && p.hi_closed)) {
          m.hi_closed = p.hi > m.hi ? p.hi_closed : (m.hi_closed || p.hi_closed);
          m.hi = p.hi;
        }
      } else {
        merged.push_back(p);
      }
    }
    return BorelSet(std::move(merged));
  }

  friend bool disjoint(const BorelSet& a, const BorelSet& b) {
    for (const auto& p : a.pieces_)
      for (const auto& q : b.pieces_)
        if (overlaps(p, q)) return false;
    return true;
  }

private:
  static bool overlaps(const Piece& p, const Piece& q) {
    double lo = p.lo, hi = p.hi;
    bool lo_closed = p.lo_closed, hi_closed = p.hi_closed;
    if (q.lo > lo) {
      lo = q.lo;
      lo_closed = q.lo_closed;
    } else if (q.lo == lo) {
      lo_closed = lo_closed && q.lo_closed;
    }
    if (q.hi < hi) {
      hi = q.hi;
      hi_closed = q.hi_closed;
    } else if (q.hi == hi) {
      hi_closed = hi_closed && q.hi_closed;
    }
    return lo < hi || (lo == hi && lo_closed && hi_closed);
  }

  // p starts no later than q; true when their union is a single interval.
  static bool touches(const Piece& p, const Piece& q) {
    return overlaps(p, q) || (q.lo == p.hi && (p.hi_closed || q.lo_closed));
  }

  std::vector<Piece> pieces_;
};

/// A bounded observable: a Hermitian operator and its spectral measure,
/// grouped into distinct eigenvalues with their eigenprojections.
class BoundedObservable {
public:
  struct Level {
    double value;
    ClosedSubspace projection;
  };

  explicit BoundedObservable(const ComplexMatrix& a, const Tolerances& tol = {})
      : operator_((a + adjoint(a)) * Complex(0.5)) {
    require_hermitian(a, tol);
    const auto eig = hermitian_eig(operator_, tol);
    const std::size_t n = a.dim();
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start + 1;
      while (end < n && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= tol.eig_group) ++end;
      double sum = 0.0;
      std::vector<Vector> basis;
      for (std::size_t j = start; j < end; ++j) {
        sum += eig.eigenvalues[j];
        basis.push_back(eig.eigenvector(j));
      }
      levels_.push_back({sum / static_cast<double>(end - start),
                         ClosedSubspace::from_orthonormal(std::move(basis), n)});
      start = end;
    }
  }

  std::size_t dim() const noexcept { return operator_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return operator_; }
  const std::vector<Level>& levels() const noexcept { return levels_; }

  double min_eigenvalue() const { return levels_.empty() ? 0.0 : levels_.front().value; }
  double max_eigenvalue() const { return levels_.empty() ? 0.0 : levels_.back().value; }

private:
  ComplexMatrix operator_;
  std::vector<Level> levels_;  // ascending by value
};

inline BoundedObservable observable_from_hermitian(const ComplexMatrix& a,
                                                   const Tolerances& tol = {}) {
  return BoundedObservable(a, tol);
}

/// r(U): the join of the eigenprojections whose eigenvalue lies in U.
inline ClosedSubspace pvm_map(const BoundedObservable& r, const BorelSet& u) {
  std::vector<Vector> basis;
  for (const auto& level : r.levels())
    if (u.contains(level.value))
      basis.insert(basis.end(), level.projection.basis().begin(),
                   level.projection.basis().end());
  return ClosedSubspace::from_orthonormal(std::move(basis), r.dim());
}

struct SpectrumBounds {
  double m;  // inf Spec
  double M;  // sup Spec
};

inline SpectrumBounds spectrum_bounds(const BoundedObservable& r) {
  return {r.min_eigenvalue(), r.max_eigenvalue()};
}

/// Q(U) = tr(r(U) f), a sub-probability distribution on the spectrum.
struct SubDistribution {
  struct Atom {
    double value;
    double weight;
  };
  std::vector<Atom> support;
  double total = 0.0;

  double measure(const BorelSet& u) const {
    double s = 0.0;
    for (const auto& a : support)
      if (u.contains(a.value)) s += a.weight;
    return s;
  }
};

inline void require_same_dim(const BoundedObservable& r, const PartialDensityOperator& f) {
  if (r.dim() != f.dim()) throw DimensionError(r.dim(), f.dim());
}

inline SubDistribution distribution(const BoundedObservable& r, const PartialDensityOperator& f,
                                    const Tolerances& tol = {}) {
  require_same_dim(r, f);
  SubDistribution q;
  for (const auto& level : r.levels()) {
    const double w = gleason_measure(f, level.projection, tol);
    q.support.push_back({level.value, w});
    q.total += w;
  }
  return q;
}

/// The integral of t dQ(t) over [m, M], cross-checked against tr(A f).
inline double e0(const BoundedObservable& r, const PartialDensityOperator& f,
                 const Tolerances& tol = {}) {
  const auto q = distribution(r, f, tol);
  double integral = 0.0;
  for (const auto& a : q.support) integral += a.value * a.weight;
  const double direct = trace_of_product(r.matrix(), f.matrix()).real();
  if (std::abs(integral - direct) > 1e-7)
    throw Error("spectral integral " + std::to_string(integral) + " disagrees with tr(A f) " +
                std::to_string(direct));
  return integral;
}

/// Expected value with its components, as reported by the CLI.
struct Expectation {
  CompactInterval interval;
  double e0;
  double missing;  // 1 - tr f
  double m;
  double M;
};

inline Expectation expectation(const BoundedObservable& r, const PartialDensityOperator& f,
                               const Tolerances& tol = {}) {
  const double mean = e0(r, f, tol);
  const double missing = nontermination_probability(f);
  const auto [m, M] = spectrum_bounds(r);
  return {translate(mean, scale_interval(missing, CompactInterval(m, M))), mean, missing, m, M};
}

inline CompactInterval expected_interval(const BoundedObservable& r,
                                         const PartialDensityOperator& f,
                                         const Tolerances& tol = {}) {
  return expectation(r, f, tol).interval;
}

inline CompactInterval expected_interval_op(const ComplexMatrix& a,
                                            const PartialDensityOperator& f,
                                            const Tolerances& tol = {}) {
  return expected_interval(BoundedObservable(a, tol), f, tol);
}

/// E(A^2 | f) = tr(A^2 f) + (1 - tr f) [k^2, K^2] where k and K are the
/// smallest and largest |eigenvalue| of A.
inline CompactInterval observable_square_interval(const ComplexMatrix& a,
                                                  const PartialDensityOperator& f,
                                                  const Tolerances& tol = {}) {
  const BoundedObservable r(a, tol);
  require_same_dim(r, f);
  double k = std::numeric_limits<double>::infinity(), big = 0.0;
  double second_moment = 0.0;
  for (const auto& level : r.levels()) {
    const double mag = std::abs(level.value);
    k = std::min(k, mag);
    big = std::max(big, mag);
    second_moment += level.value * level.value * gleason_measure(f, level.projection, tol);
  }
  if (r.levels().empty()) k = 0.0;
  const double missing = nontermination_probability(f);
  return translate(second_moment, scale_interval(missing, CompactInterval(k * k, big * big)));
}

inline bool commutes(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  a.require_same(b);
  return max_abs_diff(mat_mul(a, b), mat_mul(b, a)) <= tol;
}

}  // namespace qrec
