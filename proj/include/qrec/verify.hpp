#pragma once

// Randomized verification suites. Each invariant runs `trials` seeded trials
// per dimension and records how many failed, the worst deviation seen and
// the (dim, trial, seed) of the first few failures so they can be replayed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrec/error.hpp"
#include "qrec/intervals.hpp"
#include "qrec/linalg.hpp"
#include "qrec/observables.hpp"
#include "qrec/partial_density.hpp"
#include "qrec/qlang/interpreter.hpp"
#include "qrec/qlang/parser.hpp"
#include "qrec/quantum_logic.hpp"
#include "qrec/random.hpp"

namespace qrec::verify {

struct Options {
  std::vector<std::size_t> dims{3, 4};
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  Tolerances tol{};
  FixpointConfig fixpoint{};
  bool corrupt_chain = false;  // negative control for the dcpo suite
};

struct Failure {
  std::size_t dim;
  std::size_t trial;
  std::uint64_t seed;
  std::optional<std::size_t> witness_index;
};

struct InvariantResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failed = 0;
  double worst_deviation = 0.0;
  std::vector<Failure> failures;  // first few only

  bool passed() const noexcept { return failed == 0; }
};

struct SuiteReport {
  std::string suite;
  Options options;
  std::vector<InvariantResult> invariants;

  bool passed() const {
    return std::all_of(invariants.begin(), invariants.end(),
                       [](const InvariantResult& r) { return r.passed(); });
  }
};

/// What a single trial observed.
struct Outcome {
  bool ok = true;
  double deviation = 0.0;
  std::optional<std::size_t> witness_index;
};

using Trial = std::function<Outcome(Sampler&, std::size_t dim)>;

inline InvariantResult run_invariant(std::string name, const Options& opt, std::uint64_t stream,
                                     const Trial& trial) {
  constexpr std::size_t kept_failures = 10;
  InvariantResult r{std::move(name)};
  for (std::size_t dim : opt.dims) {
    for (std::size_t t = 0; t < opt.trials; ++t) {
      const std::uint64_t s = mix_seed(opt.seed, stream * 1000003 + dim, t);
      Sampler rng(s);
      Outcome o;
      try {
        o = trial(rng, dim);
      } catch (const MonotonicityError& e) {
        o = {false, 0.0, e.index()};
      } catch (const Error&) {
        o = {false, 0.0, std::nullopt};
      }
      ++r.checks;
      r.worst_deviation = std::max(r.worst_deviation, o.deviation);
      if (!o.ok) {
        ++r.failed;
        if (r.failures.size() < kept_failures) r.failures.push_back({dim, t, s, o.witness_index});
      }
    }
  }
  return r;
}

// ---- shared random objects -------------------------------------------------

inline PartialDensityOperator random_partial_density(Sampler& rng, std::size_t n,
                                                     const Tolerances& tol = {}) {
  return PartialDensityOperator(rng.partial_density_matrix(n), tol);
}

/// f together with g = f + remainder, where the remainder is positive with
/// trace drawn from [0, 1 - tr f].
struct ComparablePair {
  PartialDensityOperator lower;
  PartialDensityOperator upper;
};

inline ComparablePair random_comparable_pair(Sampler& rng, std::size_t n, const Tolerances& tol = {},
                                             std::optional<double> remainder_trace = std::nullopt) {
  auto f = PartialDensityOperator(rng.positive_with_trace(n, rng.uniform(0.0, 0.95)), tol);
  const double room = std::max(0.0, 1.0 - f.trace());
  const double t = remainder_trace ? std::min(*remainder_trace, room) : rng.uniform(0.0, room);
  auto g = PartialDensityOperator(f.matrix() + rng.positive_with_trace(n, t), tol);
  return {std::move(f), std::move(g)};
}

/// Half comparable pairs (in either order), half independent draws.
inline std::pair<PartialDensityOperator, PartialDensityOperator> random_pair(Sampler& rng, std::size_t n,
                                                                             const Tolerances& tol = {}) {
  const double u = rng.uniform();
  if (u < 0.5) {
    auto p = random_comparable_pair(rng, n, tol);
    if (u < 0.25) return {std::move(p.upper), std::move(p.lower)};
    return {std::move(p.lower), std::move(p.upper)};
  }
  auto f = random_partial_density(rng, n, tol);
  auto g = random_partial_density(rng, n, tol);
  return {std::move(f), std::move(g)};
}

inline ClosedSubspace random_event(Sampler& rng, std::size_t n) {
  return random_subspace(rng, n, rng.index(1, n));
}

/// Two commuting Hermitian matrices diagonal in one shared random basis.
inline std::pair<ComplexMatrix, ComplexMatrix> random_commuting_pair(Sampler& rng, std::size_t n) {
  const ComplexMatrix u = rng.unitary(n);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform(-2.0, 2.0);
    b[i] = rng.uniform(-2.0, 2.0);
  }
  return {Sampler::conjugate(u, ComplexMatrix::diagonal(a)), Sampler::conjugate(u, ComplexMatrix::diagonal(b))};
}

inline double endpoint_distance(const CompactInterval& a, const CompactInterval& b) {
  return std::max(std::abs(a.lo() - b.lo()), std::abs(a.hi() - b.hi()));
}

/// (1 - 2^-n) f for n = 0, 1, 2, ...; with `corrupt_at`, that element is
/// replaced by a strictly smaller one.
inline auto geometric_chain(const PartialDensityOperator& f, std::optional<std::size_t> corrupt_at = {}) {
  return [f, corrupt_at, n = std::size_t{0}]() mutable -> std::optional<PartialDensityOperator> {
    const std::size_t k = n++;
    double c = 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 1000)));
    if (corrupt_at && k == *corrupt_at) c *= 0.25;
    return f.scaled(c);
  };
}

// ---- quantum logic -----------------------------------------------------------

/// Loewner order against the measure order sampled on random events.
///
/// A violated event certifies that G(f) <= G(g) fails, so any sampled
/// violation must coincide with a Loewner failure, and every Loewner failure
/// must be confirmed on the measure side by its witness ray. A finite sample
/// alone cannot certify <=, so a Loewner failure whose negative directions
/// the sample happens to miss is not counted here; see
/// sampled_order_agreement for the strict two-sided comparison.
inline InvariantResult order_isomorphism(const Options& opt, std::size_t subspaces = 200) {
  return run_invariant("order_isomorphism", opt, 1, [&](Sampler& rng, std::size_t n) {
    auto [f, g] = random_pair(rng, n, opt.tol);
    const auto order = state_leq(f, g, opt.tol);
    bool sampled_violation = false;
    double worst = 0.0;
    for (std::size_t s = 0; s < subspaces; ++s) {
      const auto k = random_event(rng, n);
      const double excess = gleason_measure(f, k, opt.tol) - gleason_measure(g, k, opt.tol);
      worst = std::max(worst, excess);
      if (excess > 1e-9) sampled_violation = true;
    }
    if (order) return Outcome{!sampled_violation, std::max(0.0, worst)};
    const double gap = gleason_measure(f, *order.witness, opt.tol) - gleason_measure(g, *order.witness, opt.tol);
    return Outcome{gap > 1e-9, 0.0};
  });
}

/// Strict form: the Loewner verdict equals "no event in a sample of
/// `subspaces` random events is violated". Deviation records the most
/// negative eigenvalue of g - f among disagreeing trials.
inline InvariantResult sampled_order_agreement(const Options& opt, std::size_t subspaces = 200) {
  return run_invariant("sampled_order_agreement", opt, 1, [&](Sampler& rng, std::size_t n) {
    auto [f, g] = random_pair(rng, n, opt.tol);
    const auto psd = is_positive_semidefinite(g.matrix() - f.matrix(), opt.tol);
    bool measure = true;
    for (std::size_t s = 0; s < subspaces; ++s) {
      const auto k = random_event(rng, n);
      if (gleason_measure(f, k, opt.tol) - gleason_measure(g, k, opt.tol) > 1e-9) measure = false;
    }
    const bool agree = psd.positive == measure;
    return Outcome{agree, agree ? 0.0 : -psd.min_eigenvalue};
  });
}

inline InvariantResult witness_separates(const Options& opt) {
  return run_invariant("witness_separates", opt, 2, [&](Sampler& rng, std::size_t n) {
    auto [f, g] = random_pair(rng, n, opt.tol);
    const auto order = state_leq(f, g, opt.tol);
    if (order) return Outcome{};
    const double gap = gleason_measure(f, *order.witness, opt.tol) - gleason_measure(g, *order.witness, opt.tol);
    return Outcome{gap > 1e-9, gap > 1e-9 ? 0.0 : 1e-9 - gap};
  });
}

inline InvariantResult orthogonal_additivity(const Options& opt) {
  return run_invariant("orthogonal_additivity", opt, 3, [&](Sampler& rng, std::size_t n) {
    const auto f = random_partial_density(rng, n, opt.tol);
    const auto family = random_orthogonal_family(rng, n);
    ClosedSubspace joined = ClosedSubspace::zero(n);
    double sum = 0.0;
    for (const auto& k : family) {
      joined = join(joined, k, opt.tol);
      sum += gleason_measure(f, k, opt.tol);
    }
    const double dev = std::abs(gleason_measure(f, joined, opt.tol) - sum);
    return Outcome{dev <= 1e-9, dev};
  });
}

inline InvariantResult subprobability_axioms(const Options& opt, std::size_t families = 5) {
  return run_invariant("subprobability_axioms", opt, 4, [&](Sampler& rng, std::size_t n) {
    const auto f = random_partial_density(rng, n, opt.tol);
    const auto rep = check_subprobability_axioms(f, families, rng.engine()(), opt.tol);
    const double whole_dev = std::abs(rep.measure_of_whole - f.trace());
    const bool ok = rep.passed && rep.measure_of_zero == 0.0 && whole_dev <= 1e-10;
    return Outcome{ok, std::max(rep.worst_additivity_deviation, whole_dev)};
  });
}

inline InvariantResult event_monotonicity(const Options& opt) {
  return run_invariant("event_monotonicity", opt, 5, [&](Sampler& rng, std::size_t n) {
    const auto f = random_partial_density(rng, n, opt.tol);
    const auto small = random_subspace(rng, n, rng.index(0, n));
    const auto big = join(small, random_subspace(rng, n, rng.index(0, n)), opt.tol);
    if (!small.is_subspace_of(big, 1e-8)) return Outcome{false, 1.0};
    const double excess = gleason_measure(f, small, opt.tol) - gleason_measure(f, big, opt.tol);
    return Outcome{excess <= 1e-9, std::max(0.0, excess)};
  });
}

inline InvariantResult measure_scaling(const Options& opt) {
  return run_invariant("measure_scaling", opt, 6, [&](Sampler& rng, std::size_t n) {
    const auto f = random_partial_density(rng, n, opt.tol);
    const double r = rng.uniform();
    const auto k = random_event(rng, n);
    const double dev = std::abs(gleason_measure(f.scaled(r), k, opt.tol) - r * gleason_measure(f, k, opt.tol));
    return Outcome{dev <= 1e-10, dev};
  });
}

inline InvariantResult lattice_laws(const Options& opt) {
  return run_invariant("lattice_laws", opt, 7, [&](Sampler& rng, std::size_t n) {
    const auto a = random_subspace(rng, n, rng.index(0, n));
    const auto b = random_subspace(rng, n, rng.index(0, n));
    auto d = [](const ClosedSubspace& x, const ClosedSubspace& y) {
      return max_abs_diff(x.projection(), y.projection());
    };
    const auto& t = opt.tol;
    double dev = 0.0;
    dev = std::max(dev, d(join(a, b, t), join(b, a, t)));
    dev = std::max(dev, d(meet(a, b, t), meet(b, a, t)));
    dev = std::max(dev, d(join(a, a, t), a));
    dev = std::max(dev, d(meet(a, a, t), a));
    dev = std::max(dev, d(orthocomplement(orthocomplement(a, t), t), a));
    dev = std::max(dev, d(orthocomplement(join(a, b, t), t), meet(orthocomplement(a, t), orthocomplement(b, t), t)));
    return Outcome{dev <= 1e-8, dev};
  });
}

// ---- partial density operators -----------------------------------------------

inline InvariantResult geometric_chain_supremum(const Options& opt) {
  return run_invariant("geometric_chain_supremum", opt, 11, [&](Sampler& rng, std::size_t n) {
    const auto f = random_partial_density(rng, n, opt.tol);
    auto sup = chain_supremum(geometric_chain(f), opt.fixpoint, opt.tol);
    const double dev = max_abs_diff(sup.value.matrix(), f.matrix());
    // Successive trace gaps halve while they are above rounding noise.
    bool halving = true;
    for (std::size_t i = 2; i < sup.trace_log.size(); ++i) {
      const double g1 = sup.trace_log[i - 1] - sup.trace_log[i - 2];
      const double g2 = sup.trace_log[i] - sup.trace_log[i - 1];
      if (g1 > 1e-12 && std::abs(g2 / g1 - 0.5) > 1e-3) halving = false;
    }
    return Outcome{sup.converged && halving && dev <= 1e-8, dev};
  });
}

inline InvariantResult supremum_is_least_upper_bound(const Options& opt) {
  return run_invariant("supremum_is_least_upper_bound", opt, 12, [&](Sampler& rng, std::size_t n) {
    const auto f = random_partial_density(rng, n, opt.tol);
    auto sup = chain_supremum(geometric_chain(f), opt.fixpoint, opt.tol);
    bool ok = loewner_leq(sup.value, f, opt.tol).leq;  // below the known bound f
    auto chain = geometric_chain(f);
    for (std::size_t i = 0; i <= sup.iterations; ++i)
      ok = ok && loewner_leq(*chain(), sup.value, opt.tol).leq;
    return Outcome{ok, 0.0};
  });
}

inline InvariantResult gleason_scott_continuity(const Options& opt, std::size_t events = 50) {
  return run_invariant("gleason_scott_continuity", opt, 13, [&](Sampler& rng, std::size_t n) {
    const auto f = random_partial_density(rng, n, opt.tol);
    std::vector<PartialDensityOperator> seen;
    auto chain = geometric_chain(f);
    auto sup = chain_supremum(
        [&]() {
          auto x = chain();
          seen.push_back(*x);
          return x;
        },
        opt.fixpoint, opt.tol);
    double dev = 0.0;
    for (std::size_t e = 0; e < events; ++e) {
      const auto k = random_event(rng, n);
      double best = 0.0;
      for (const auto& x : seen) best = std::max(best, gleason_measure(x, k, opt.tol));
      dev = std::max(dev, std::abs(gleason_measure(sup.value, k, opt.tol) - best));
    }
    return Outcome{dev <= 1e-6, dev};
  });
}

inline InvariantResult monotone_chain(const Options& opt) {
  return run_invariant("monotone_chain", opt, 14, [&](Sampler& rng, std::size_t n) {
    const auto f = PartialDensityOperator(rng.positive_with_trace(n, rng.uniform(0.2, 1.0)), opt.tol);
    std::optional<std::size_t> corrupt;
    if (opt.corrupt_chain) corrupt = rng.index(2, 10);
    chain_supremum(geometric_chain(f, corrupt), opt.fixpoint, opt.tol);
    return Outcome{};
  });
}

inline InvariantResult loewner_order_laws(const Options& opt) {
  return run_invariant("loewner_order_laws", opt, 15, [&](Sampler& rng, std::size_t n) {
    const auto& t = opt.tol;
    const auto f = PartialDensityOperator(rng.positive_with_trace(n, rng.uniform(0.0, 0.5)), t);
    const auto g = PartialDensityOperator(f.matrix() + rng.positive_with_trace(n, rng.uniform(0.0, 0.25)), t);
    const auto h = PartialDensityOperator(g.matrix() + rng.positive_with_trace(n, rng.uniform(0.0, 0.25)), t);
    bool ok = loewner_leq(f, f, t).leq && loewner_leq(f, g, t).leq && loewner_leq(g, h, t).leq &&
              loewner_leq(f, h, t).leq;
    // Antisymmetry: a perturbation far below psd_tol is mutually comparable
    // and must then be close in max-norm.
    const auto near = PartialDensityOperator(f.matrix() + rng.positive_with_trace(n, 1e-12), t);
    double dev = 0.0;
    if (loewner_leq(f, near, t).leq && loewner_leq(near, f, t).leq) {
      dev = max_abs_diff(f.matrix(), near.matrix());
      ok = ok && dev <= 10 * t.psd;
    }
    // Norm bounded by trace.
    const double top = hermitian_eig(f.matrix(), t).eigenvalues.back();
    ok = ok && top <= f.trace() + 1e-12 && f.trace() <= 1.0 + t.psd;
    return Outcome{ok, dev};
  });
}

// ---- observables and intervals -------------------------------------------------

inline InvariantResult expectation_reference_values(const Options& opt) {
  return run_invariant("expectation_reference_values", opt, 21, [&](Sampler& rng, std::size_t n) {
    const ComplexMatrix z = ComplexMatrix::diagonal({1.0, -1.0});
    const auto e = expected_interval_op(z, PartialDensityOperator(ComplexMatrix::diagonal({0.5, 0.25})), opt.tol);
    double dev = endpoint_distance(e, CompactInterval(0.0, 0.5));
    const ComplexMatrix a = rng.hermitian(n);
    const BoundedObservable r(a, opt.tol);
    const auto [m, M] = spectrum_bounds(r);
    dev = std::max(dev, endpoint_distance(expected_interval(r, PartialDensityOperator::zero(n), opt.tol),
                                          CompactInterval(m, M)));
    const auto total = PartialDensityOperator(rng.positive_with_trace(n, 1.0), opt.tol);
    const auto et = expected_interval(r, total, opt.tol);
    const double mean = trace_of_product(a, total.matrix()).real();
    dev = std::max(dev, std::max(std::abs(et.lo() - mean), std::abs(et.hi() - mean)));
    return Outcome{dev <= 1e-10, dev};
  });
}

inline InvariantResult expectation_monotone(const Options& opt) {
  return run_invariant("expectation_monotone", opt, 22, [&](Sampler& rng, std::size_t n) {
    const BoundedObservable r(rng.hermitian(n), opt.tol);
    const auto [f, g] = random_comparable_pair(rng, n, opt.tol);
    const auto ef = expected_interval(r, f, opt.tol);
    const auto eg = expected_interval(r, g, opt.tol);
    const double excess = std::max({0.0, ef.lo() - eg.lo(), eg.hi() - ef.hi()});
    return Outcome{reverse_inclusion_leq(ef, eg, 1e-12), excess};
  });
}

inline InvariantResult expectation_scott_continuity(const Options& opt) {
  return run_invariant("expectation_scott_continuity", opt, 23, [&](Sampler& rng, std::size_t n) {
    const BoundedObservable r(rng.hermitian(n), opt.tol);
    const auto f = random_partial_density(rng, n, opt.tol);
    std::vector<CompactInterval> intervals;
    std::vector<double> means;
    auto chain = geometric_chain(f);
    auto sup = chain_supremum(
        [&]() {
          auto x = chain();
          intervals.push_back(expected_interval(r, *x, opt.tol));
          means.push_back(e0(r, *x, opt.tol));
          return x;
        },
        opt.fixpoint, opt.tol);
    const auto limit = directed_intersection(intervals, 1e-12);
    const double dev_interval = endpoint_distance(limit, expected_interval(r, sup.value, opt.tol));
    const double dev_mean = std::abs(means.back() - e0(r, sup.value, opt.tol));
    const double dev_true = endpoint_distance(limit, expected_interval(r, f, opt.tol));
    return Outcome{dev_interval <= 1e-6 && dev_true <= 1e-6 && dev_mean <= 1e-8,
                   std::max({dev_interval, dev_true, dev_mean})};
  });
}

inline InvariantResult total_completion_containment(const Options& opt) {
  return run_invariant("total_completion_containment", opt, 24, [&](Sampler& rng, std::size_t n) {
    const ComplexMatrix a = rng.hermitian(n);
    const BoundedObservable r(a, opt.tol);
    const auto [f, g] = random_comparable_pair(rng, n, opt.tol, 1.0);
    const auto e = expected_interval(r, f, opt.tol);
    const double value = trace_of_product(a, g.matrix()).real();
    const double outside = std::max({0.0, e.lo() - value, value - e.hi()});
    return Outcome{std::abs(g.trace() - 1.0) <= 1e-12 && outside <= 1e-9, outside};
  });
}

/// The point parts tr(A f) are linear for any A, B. The interval parts obey
/// E(kA + lB) within kE(A) + lE(B), with equality when kA and lB are
/// ordered alike on the shared eigenbasis.
inline InvariantResult commuting_linear_combination(const Options& opt) {
  return run_invariant("commuting_linear_combination", opt, 25, [&](Sampler& rng, std::size_t n) {
    const auto& t = opt.tol;
    const auto [a, b] = random_commuting_pair(rng, n);
    const double k = rng.uniform(-3.0, 3.0), l = rng.uniform(-3.0, 3.0);
    const auto f = random_partial_density(rng, n, t);
    const ComplexMatrix c = a * Complex(k) + b * Complex(l);
    const auto lhs = expected_interval_op(c, f, t);
    const auto rhs = add_intervals(scale_interval(k, expected_interval_op(a, f, t)),
                                   scale_interval(l, expected_interval_op(b, f, t)));
    const BoundedObservable ra(a, t), rb(b, t), rc(c, t);
    const double point_dev = std::abs(e0(rc, f, t) - (k * e0(ra, f, t) + l * e0(rb, f, t)));
    const bool inside = reverse_inclusion_leq(rhs, lhs, 1e-9);

    // Comonotone case: sort both spectra the same way on one basis.
    const ComplexMatrix u = rng.unitary(n);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-2.0, 2.0);
      y[i] = rng.uniform(-2.0, 2.0);
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double kp = std::abs(k), lp = std::abs(l);
    const ComplexMatrix ax = Sampler::conjugate(u, ComplexMatrix::diagonal(x));
    const ComplexMatrix by = Sampler::conjugate(u, ComplexMatrix::diagonal(y));
    const auto co_lhs = expected_interval_op(ax * Complex(kp) + by * Complex(lp), f, t);
    const auto co_rhs = add_intervals(scale_interval(kp, expected_interval_op(ax, f, t)),
                                      scale_interval(lp, expected_interval_op(by, f, t)));
    const double co_dev = endpoint_distance(co_lhs, co_rhs);
    return Outcome{point_dev <= 1e-9 && inside && co_dev <= 1e-9, std::max(point_dev, co_dev)};
  });
}

inline InvariantResult square_law(const Options& opt) {
  return run_invariant("square_law", opt, 26, [&](Sampler& rng, std::size_t n) {
    const ComplexMatrix a = rng.hermitian(n);
    const auto f = random_partial_density(rng, n, opt.tol);
    const double dev = endpoint_distance(observable_square_interval(a, f, opt.tol),
                                         expected_interval_op(mat_mul(a, a), f, opt.tol));
    return Outcome{dev <= 1e-9, dev};
  });
}

inline InvariantResult pvm_axioms(const Options& opt) {
  return run_invariant("pvm_axioms", opt, 27, [&](Sampler& rng, std::size_t n) {
    // Integer spectrum with repeats so that eigenprojections have rank > 1.
    std::vector<double> spectrum(n);
    for (auto& s : spectrum) s = static_cast<double>(rng.index(0, 4)) - 2.0;
    const BoundedObservable r(rng.with_spectrum(spectrum), opt.tol);
    const auto& t = opt.tol;
    const auto whole = ComplexMatrix::identity(n);
    double dev = pvm_map(r, BorelSet::empty()).projection().max_abs();
    dev = std::max(dev, max_abs_diff(pvm_map(r, BorelSet::real_line()).projection(), whole));
    const double bound = std::max(std::abs(r.min_eigenvalue()), std::abs(r.max_eigenvalue()));
    dev = std::max(dev, max_abs_diff(pvm_map(r, BorelSet::closed(-bound, bound)).projection(), whole));
    const double cut = rng.uniform(-2.5, 2.5);
    const BorelSet left({{-10.0, cut, true, false}});
    const BorelSet right({{cut, 10.0, true, true}});
    const auto pl = pvm_map(r, left), pr = pvm_map(r, right);
    bool ok = are_orthogonal(pl, pr, t);
    dev = std::max(dev, max_abs_diff(pvm_map(r, unite(left, right)).projection(), join(pl, pr, t).projection()));
    return Outcome{ok && dev <= 1e-8, dev};
  });
}

// ---- while-language -------------------------------------------------------------

inline std::string fair_coin_source() { return "qubit q;\nh q;\nwhile q in |1> { h q; }\n"; }
inline std::string diverging_source() { return "qubit q;\nwhile q in |0> { skip; }\n"; }

/// Random program text of nesting depth <= `depth`.
inline std::string random_program(Sampler& rng, std::size_t qubits, std::size_t depth, bool unitary_only,
                                  bool allow_loops = true) {
  std::ostringstream out;
  for (std::size_t q = 0; q < qubits; ++q) out << "qubit q" << q << ";\n";
  static const char* gates[] = {"x", "y", "z", "h", "s", "t"};
  static const char* kets[] = {"|0>", "|1>", "|+>", "|->"};
  auto qubit = [&]() { return "q" + std::to_string(rng.index(0, qubits - 1)); };
  std::function<void(std::size_t, std::size_t)> block = [&](std::size_t level, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t pick = rng.index(0, unitary_only || level >= depth ? 1 : 3);
      if (pick == 0 || (pick == 1 && qubits < 2)) {
        out << gates[rng.index(0, 5)] << ' ' << qubit() << ";\n";
      } else if (pick == 1) {
        const std::size_t c = rng.index(0, qubits - 1);
        std::size_t d = rng.index(0, qubits - 2);
        if (d >= c) ++d;
        out << "cnot q" << c << " q" << d << ";\n";
      } else if (pick == 2 || !allow_loops) {
        out << "if " << qubit() << " in " << kets[rng.index(0, 3)] << " {\n";
        block(level + 1, rng.index(0, 2));
        out << "} else {\n";
        block(level + 1, rng.index(0, 2));
        out << "}\n";
      } else {
        const std::string g = qubit();
        out << "while " << g << " in " << kets[rng.index(0, 3)] << " {\nh " << g << ";\n";
        block(level + 1, rng.index(0, 2));
        out << "}\n";
      }
    }
  };
  block(1, rng.index(1, 4));
  return out.str();
}

inline std::size_t qubits_for_dim(std::size_t dim) {
  std::size_t q = 0;
  while ((std::size_t{2} << q) <= dim && q + 1 < qlang::max_qubits) ++q;
  return std::max<std::size_t>(q, 1);
}

inline InvariantResult fair_coin_residual(const Options& opt, std::size_t max_n = 30) {
  return run_invariant("fair_coin_residual", opt, 31, [&](Sampler&, std::size_t) {
    const auto prog = qlang::parse(fair_coin_source());
    double dev = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
      FixpointConfig cfg = opt.fixpoint;
      cfg.max_iterations = n;
      cfg.trace_tol = 1e-300;
      const auto rep = qlang::interpret(prog, qlang::ground_state(prog), cfg, opt.tol);
      dev = std::max(dev, std::abs(rep.residual - std::ldexp(1.0, -static_cast<int>(n))));
    }
    const auto full = qlang::interpret(prog, qlang::ground_state(prog), opt.fixpoint, opt.tol);
    const bool converged = full.converged && full.output.trace() >= 1.0 - opt.fixpoint.trace_tol;
    return Outcome{dev <= 1e-9 && converged, dev};
  });
}

inline InvariantResult diverging_loop(const Options& opt) {
  return run_invariant("diverging_loop", opt, 32, [&](Sampler&, std::size_t) {
    const auto prog = qlang::parse(diverging_source());
    const auto rep = qlang::interpret(prog, qlang::ground_state(prog), opt.fixpoint, opt.tol);
    return Outcome{rep.residual == 1.0 && rep.converged, std::abs(rep.residual - 1.0)};
  });
}

inline InvariantResult program_trace_bounds(const Options& opt) {
  return run_invariant("program_trace_bounds", opt, 33, [&](Sampler& rng, std::size_t dim) {
    const std::size_t q = qubits_for_dim(dim);
    const bool unitary_only = rng.uniform() < 0.3;
    const auto prog = qlang::parse(random_program(rng, q, 3, unitary_only));
    const auto rho = PartialDensityOperator(rng.partial_density_matrix(prog.dim()), opt.tol);
    const auto rep = qlang::interpret(prog, rho, opt.fixpoint, opt.tol);
    const double gain = rep.output.trace() - rho.trace();
    bool ok = gain <= 1e-9;
    if (unitary_only) ok = ok && std::abs(gain) <= 1e-9;
    for (std::size_t i = 1; i < rep.chain_trace_log.size(); ++i)
      ok = ok && rep.chain_trace_log[i] >= rep.chain_trace_log[i - 1] - 1e-12;
    return Outcome{ok, std::max(0.0, gain)};
  });
}

inline InvariantResult branch_conserves_trace(const Options& opt) {
  return run_invariant("branch_conserves_trace", opt, 34, [&](Sampler& rng, std::size_t dim) {
    const std::size_t q = qubits_for_dim(dim);
    const auto prog = qlang::parse(random_program(rng, q, 3, false, false));
    const auto rho = PartialDensityOperator(rng.partial_density_matrix(prog.dim()), opt.tol);
    const auto rep = qlang::interpret(prog, rho, opt.fixpoint, opt.tol);
    const double dev = std::abs(rep.output.trace() - rho.trace());
    return Outcome{dev <= 1e-9, dev};
  });
}

inline InvariantResult denotation_linearity(const Options& opt) {
  return run_invariant("denotation_linearity", opt, 35, [&](Sampler& rng, std::size_t dim) {
    const std::size_t q = qubits_for_dim(dim);
    const auto prog = qlang::parse(random_program(rng, q, 3, false));
    const std::size_t n = prog.dim();
    const double alpha = rng.uniform(), beta = rng.uniform(0.0, 1.0 - alpha);
    const auto r1 = PartialDensityOperator(rng.partial_density_matrix(n), opt.tol);
    const auto r2 = PartialDensityOperator(rng.partial_density_matrix(n), opt.tol);
    const auto mixed = PartialDensityOperator(r1.matrix() * Complex(alpha) + r2.matrix() * Complex(beta), opt.tol);
    // Loops stop on input-dependent iterations; truncation error accumulates
    // through nested loops, so compare at a tighter stopping threshold.
    FixpointConfig cfg = opt.fixpoint;
    cfg.trace_tol = std::min(cfg.trace_tol, 1e-12);
    auto run = [&](const PartialDensityOperator& rho) {
      return qlang::interpret(prog, rho, cfg, opt.tol).output.matrix();
    };
    const double dev = max_abs_diff(run(mixed), run(r1) * Complex(alpha) + run(r2) * Complex(beta));
    return Outcome{dev <= 1e-8, dev};
  });
}

// ---- suites ------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gleason", "dcpo", "interval", "qlang"};
  return names;
}

inline SuiteReport run_suite(std::string_view suite, const Options& opt) {
  for (auto d : opt.dims)
    if (d < 2 || d > 16) throw Error("dimension " + std::to_string(d) + " outside [2, 16]");
  if (opt.trials < 1) throw Error("trials must be >= 1");
  SuiteReport rep{std::string(suite), opt, {}};
  auto& inv = rep.invariants;
  if (suite == "gleason") {
    inv.push_back(order_isomorphism(opt));
    inv.push_back(witness_separates(opt));
    inv.push_back(orthogonal_additivity(opt));
    inv.push_back(subprobability_axioms(opt));
    inv.push_back(event_monotonicity(opt));
    inv.push_back(measure_scaling(opt));
    inv.push_back(lattice_laws(opt));
  } else if (suite == "dcpo") {
    inv.push_back(monotone_chain(opt));
    inv.push_back(geometric_chain_supremum(opt));
    inv.push_back(supremum_is_least_upper_bound(opt));
    inv.push_back(gleason_scott_continuity(opt));
    inv.push_back(loewner_order_laws(opt));
  } else if (suite == "interval") {
    inv.push_back(expectation_reference_values(opt));
    inv.push_back(expectation_monotone(opt));
    inv.push_back(expectation_scott_continuity(opt));
    inv.push_back(total_completion_containment(opt));
    inv.push_back(commuting_linear_combination(opt));
    inv.push_back(square_law(opt));
    inv.push_back(pvm_axioms(opt));
  } else if (suite == "qlang") {
    inv.push_back(fair_coin_residual(opt));
    inv.push_back(diverging_loop(opt));
    inv.push_back(program_trace_bounds(opt));
    inv.push_back(branch_conserves_trace(opt));
    inv.push_back(denotation_linearity(opt));
  } else {
    throw Error("unknown suite '" + std::string(suite) + "'");
  }
  return rep;
}

inline nlohmann::json to_json(const SuiteReport& rep) {
  nlohmann::json invariants = nlohmann::json::array();
  for (const auto& r : rep.invariants) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : r.failures) {
      nlohmann::json j{{"dim", f.dim}, {"trial", f.trial}, {"seed", f.seed}};
      if (f.witness_index) j["witness_index"] = *f.witness_index;
      failures.push_back(std::move(j));
    }
    invariants.push_back({{"name", r.name},
                          {"checks", r.checks},
                          {"failed", r.failed},
                          {"passed", r.passed()},
                          {"worst_deviation", r.worst_deviation},
                          {"failures", std::move(failures)}});
  }
  return {{"suite", rep.suite},
          {"seed", rep.options.seed},
          {"dims", rep.options.dims},
          {"trials", rep.options.trials},
          {"passed", rep.passed()},
          {"invariants", std::move(invariants)}};
}

}  // namespace qrec::verify
