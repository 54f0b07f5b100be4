#pragma once

// The operations behind the command-line subcommands. They take already
// loaded text/JSON and return JSON plus the process exit code, so the CLI
// binary only does file I/O and argument parsing.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrec/error.hpp"
#include "qrec/observables.hpp"
#include "qrec/partial_density.hpp"
#include "qrec/qlang/interpreter.hpp"
#include "qrec/qlang/parser.hpp"
#include "qrec/serialize.hpp"
#include "qrec/verify.hpp"

namespace qrec::cli {

enum ExitCode : int { ok = 0, failure = 1, not_converged = 2 };

struct CliConfig {
  Tolerances tol{};
  FixpointConfig fixpoint{};
  std::uint64_t seed = 42;

  void validate() const {
    for (double t : {tol.hermitian, tol.psd, tol.eig, fixpoint.trace_tol})
      if (!(t > 0.0)) throw Error("tolerances must be positive");
    fixpoint.validate();
  }
};

struct CommandResult {
  nlohmann::json output;
  int exit_code = ExitCode::ok;
};

/// Runs a program on `input`, or on |0...0><0...0| when none is given.
inline CommandResult cmd_run(std::string_view program_text, const std::optional<nlohmann::json>& input,
                             const CliConfig& cfg) {
  cfg.validate();
  const auto prog = qlang::parse(program_text);
  const auto rho = input ? partial_density_from_json(*input, cfg.tol) : qlang::ground_state(prog);
  const auto report = qlang::interpret(prog, rho, cfg.fixpoint, cfg.tol);
  return {to_json(report), report.converged ? ExitCode::ok : ExitCode::not_converged};
}

inline CommandResult cmd_expect(const nlohmann::json& observable, const nlohmann::json& state,
                                const CliConfig& cfg) {
  cfg.validate();
  const BoundedObservable r(matrix_from_json(observable), cfg.tol);
  const auto f = partial_density_from_json(state, cfg.tol);
  return {to_json(expectation(r, f, cfg.tol)), ExitCode::ok};
}

inline CommandResult cmd_verify(std::string_view suite, const std::vector<std::size_t>& dims,
                                std::size_t trials, const CliConfig& cfg, bool corrupt_chain = false) {
  cfg.validate();
  verify::Options opt;
  opt.dims = dims;
  opt.trials = trials;
  opt.seed = cfg.seed;
  opt.tol = cfg.tol;
  opt.fixpoint = cfg.fixpoint;
  opt.corrupt_chain = corrupt_chain;
  const auto rep = verify::run_suite(suite, opt);
  return {verify::to_json(rep), rep.passed() ? ExitCode::ok : ExitCode::failure};
}

}  // namespace qrec::cli
