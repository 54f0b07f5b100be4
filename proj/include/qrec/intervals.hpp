#pragma once

// Non-empty compact real intervals ordered by reverse inclusion.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ranges>
#include <string>

#include "qrec/error.hpp"

namespace qrec {

class CompactInterval {
public:
  CompactInterval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw Error("interval endpoints must be finite");
    if (lo > hi)
      throw Error("empty interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  static CompactInterval point(double x) { return {x, x}; }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }

  bool contains(double x, double tol = 0.0) const noexcept {
    return lo_ - tol <= x && x <= hi_ + tol;
  }

  bool operator==(const CompactInterval&) const = default;

private:
  double lo_;
  double hi_;
};

/// k + [a, b] = [k + a, k + b]
inline CompactInterval translate(double k, const CompactInterval& a) {
  return {k + a.lo(), k + a.hi()};
}

/// {k x : x in a}; endpoints swap for negative k.
inline CompactInterval scale_interval(double k, const CompactInterval& a) {
  const double x = k * a.lo(), y = k * a.hi();
  return {std::min(x, y), std::max(x, y)};
}

inline CompactInterval add_intervals(const CompactInterval& a, const CompactInterval& b) {
  return {a.lo() + b.lo(), a.hi() + b.hi()};
}

inline CompactInterval operator+(const CompactInterval& a, const CompactInterval& b) {
  return add_intervals(a, b);
}

inline CompactInterval operator*(double k, const CompactInterval& a) {
  return scale_interval(k, a);
}

/// a <= b in the information order: b is contained in a. `tol` widens a.
inline bool reverse_inclusion_leq(const CompactInterval& a, const CompactInterval& b,
                                  double tol = 0.0) {
  return a.lo() <= b.lo() + tol && b.hi() <= a.hi() + tol;
}

/// Supremum of a nested sequence: its intersection [sup lo, inf hi]. The walk
/// stops once both endpoints move less than `tol` in a step. Each element must
/// contain the next (up to `tol`).
template <std::ranges::input_range R>
  requires std::same_as<std::ranges::range_value_t<R>, CompactInterval>
CompactInterval directed_intersection(R&& chain, double tol) {
  auto it = std::ranges::begin(chain);
  const auto end = std::ranges::end(chain);
  if (it == end) throw Error("directed_intersection: empty chain");
  CompactInterval current = *it;
  std::size_t index = 0;
  for (++it; it != end; ++it) {
    ++index;
    const CompactInterval next = *it;
    if (!reverse_inclusion_leq(current, next, tol))
      throw Error("interval chain is not nested at index " + std::to_string(index));
    const double moved = std::max(next.lo() - current.lo(), current.hi() - next.hi());
    const double lo = std::max(current.lo(), next.lo());
    const double hi = std::max(lo, std::min(current.hi(), next.hi()));
    current = CompactInterval(lo, hi);
    if (moved < tol) break;
  }
  return current;
}

}  // namespace qrec
