#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qrec/linalg.hpp"
#include "qrec/quantum_logic.hpp"

namespace qrec::qlang {

struct Statement;

struct Skip {};

struct Seq {
  std::vector<Statement> body;
};

struct ApplyUnitary {
  std::string gate_name;               // "matrix" for inline gates
  std::vector<std::size_t> targets;
  ComplexMatrix full;                  // embedding on the whole register
};

/// Measures the guard: the component inside it runs `then_body`, the
/// component in its orthocomplement runs `else_body`.
struct Branch {
  ClosedSubspace guard;
  Seq then_body;
  Seq else_body;
};

/// Repeats `body` while the state lies in `guard`.
struct While {
  ClosedSubspace guard;
  Seq body;
};

struct Statement {
  std::variant<Skip, Seq, ApplyUnitary, Branch, While> node;
};

struct Program {
  std::vector<std::pair<std::string, std::size_t>> declarations;  // name, size
  Seq body;

  std::size_t qubits() const {
    std::size_t n = 0;
    for (const auto& d : declarations) n += d.second;
    return n;
  }
  std::size_t dim() const { return std::size_t{1} << qubits(); }
};

}  // namespace qrec::qlang
