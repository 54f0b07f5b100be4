#pragma once

// Denotational interpreter over partial density operators.
//
//   [[skip]] rho            = rho
//   [[U q]] rho             = U rho U^H
//   [[if K s t]] rho        = [[s]](P rho P) + [[t]](P' rho P')
//   [[while K s]] rho       = sup_n acc_n, where
//       acc_0 = 0,  sigma_0 = rho
//       acc_{n+1}   = acc_n + P' sigma_n P'
//       sigma_{n+1} = [[s]](P sigma_n P)
//
// P projects onto the guard and P' onto its orthocomplement. Measurement is
// not renormalized, so mass that never leaves a loop is missing from the
// output; 1 - tr(output) is the probability of non-termination.

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/linalg.hpp"
#include "qrec/partial_density.hpp"
#include "qrec/qlang/ast.hpp"

namespace qrec::qlang {

struct RunReport {
  PartialDensityOperator output;
  std::vector<std::size_t> iterations_per_loop;  // one entry per loop execution, in completion order
  double residual = 1.0;                         // 1 - tr(output)
  bool converged = true;
  std::vector<double> chain_trace_log;           // approximant traces of the last top-level loop
};

namespace detail {

class Interpreter {
public:
  Interpreter(const FixpointConfig& cfg, const Tolerances& tol) : cfg_(cfg), tol_(tol) {}

  PartialDensityOperator run(const Seq& seq, PartialDensityOperator rho) {
    for (const auto& s : seq.body) rho = run(s, std::move(rho));
    return rho;
  }

  PartialDensityOperator run(const Statement& s, PartialDensityOperator rho) {
    return std::visit([&](const auto& node) { return exec(node, std::move(rho)); }, s.node);
  }

  std::vector<std::size_t> iterations;
  std::vector<double> trace_log;
  bool converged = true;

private:
  PartialDensityOperator sandwich(const ComplexMatrix& p, const ComplexMatrix& rho) const {
    return PartialDensityOperator(mat_mul(mat_mul(p, rho), adjoint(p)), tol_);
  }

  PartialDensityOperator exec(const Skip&, PartialDensityOperator rho) { return rho; }

  PartialDensityOperator exec(const Seq& seq, PartialDensityOperator rho) {
    return run(seq, std::move(rho));
  }

  PartialDensityOperator exec(const ApplyUnitary& u, PartialDensityOperator rho) {
    return sandwich(u.full, rho.matrix());
  }

  PartialDensityOperator exec(const Branch& b, PartialDensityOperator rho) {
    const ComplexMatrix& p = b.guard.projection();
    const ComplexMatrix q = ComplexMatrix::identity(p.dim()) - p;
    auto inside = run(b.then_body, sandwich(p, rho.matrix()));
    auto outside = run(b.else_body, sandwich(q, rho.matrix()));
    return PartialDensityOperator(inside.matrix() + outside.matrix(), tol_);
  }

  PartialDensityOperator exec(const While& w, PartialDensityOperator rho) {
    const ComplexMatrix& p = w.guard.projection();
    const ComplexMatrix q = ComplexMatrix::identity(p.dim()) - p;

    PartialDensityOperator acc = PartialDensityOperator::zero(rho.dim());
    PartialDensityOperator sigma = std::move(rho);
    ComplexMatrix previous = sigma.matrix();
    bool started = false;

    ++depth_;
    auto next = [&]() -> std::optional<PartialDensityOperator> {
      if (!started) {
        started = true;
        return acc;
      }
      const auto leaving = sandwich(q, sigma.matrix());
      auto staying = sandwich(p, sigma.matrix());
      previous = sigma.matrix();
      sigma = run(w.body, std::move(staying));
      acc = PartialDensityOperator(acc.matrix() + leaving.matrix(), tol_);
      return acc;
    };
    // Stopping on a small trace gap is only sound once no more mass can
    // leave: either the loop state is exhausted or it no longer changes.
    auto settled = [&]() {
      return sigma.trace() < cfg_.trace_tol || max_abs_diff(sigma.matrix(), previous) <= tol_.psd;
    };
    auto sup = chain_supremum(next, cfg_, tol_, settled);
    --depth_;

    iterations.push_back(sup.iterations);
    converged = converged && sup.converged;
    if (depth_ == 0) trace_log = std::move(sup.trace_log);
    return std::move(sup.value);
  }

  FixpointConfig cfg_;
  Tolerances tol_;
  std::size_t depth_ = 0;
};

}  // namespace detail

inline RunReport interpret(const Program& prog, const PartialDensityOperator& input,
                           const FixpointConfig& cfg = {}, const Tolerances& tol = {}) {
  cfg.validate();
  if (input.dim() != prog.dim()) throw DimensionError(prog.dim(), input.dim());
  detail::Interpreter interp(cfg, tol);
  auto out = interp.run(prog.body, input);
  RunReport report{std::move(out), std::move(interp.iterations), 0.0, interp.converged,
                   std::move(interp.trace_log)};
  report.residual = nontermination_probability(report.output);
  return report;
}

/// |0...0><0...0| on the program's register.
inline PartialDensityOperator ground_state(const Program& prog) {
  return PartialDensityOperator::basis_state(prog.dim(), 0);
}

}  // namespace qrec::qlang
