#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/linalg.hpp"

namespace qrec::qlang {

inline constexpr std::size_t max_qubits = 6;

/// Built-in gate by (case-insensitive) name: x y z h s t cnot.
inline std::optional<ComplexMatrix> named_gate(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const Complex i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  if (n == "x") return ComplexMatrix{{0, 1}, {1, 0}};
  if (n == "y") return ComplexMatrix{{0, -i}, {i, 0}};
  if (n == "z") return ComplexMatrix{{1, 0}, {0, -1}};
  if (n == "h") return ComplexMatrix{{r, r}, {r, -r}};
  if (n == "s") return ComplexMatrix{{1, 0}, {0, i}};
  if (n == "t") return ComplexMatrix{{1, 0}, {0, std::polar(1.0, std::numbers::pi / 4.0)}};
  if (n == "cnot" || n == "cx")
    return ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  return std::nullopt;
}

inline double unitarity_deviation(const ComplexMatrix& u) {
  return max_abs_diff(mat_mul(adjoint(u), u), ComplexMatrix::identity(u.dim()));
}

/// Embeds a 2^k x 2^k gate acting on `targets` into the 2^n dimensional
/// register. Qubit 0 is the most significant tensor factor; targets[0] is the
/// most significant qubit of the gate's own index.
inline ComplexMatrix denote_unitary(const ComplexMatrix& gate,
                                    std::span<const std::size_t> targets,
                                    std::size_t total_qubits) {
  if (total_qubits == 0 || total_qubits > max_qubits)
    throw Error("register of " + std::to_string(total_qubits) + " qubits is out of range");
  const std::size_t k = targets.size();
  if (k == 0 || (std::size_t{1} << k) != gate.dim())
    throw Error("gate of dimension " + std::to_string(gate.dim()) + " cannot act on " +
                std::to_string(k) + " qubit(s)");
  for (std::size_t a = 0; a < k; ++a) {
    if (targets[a] >= total_qubits)
      throw Error("qubit index " + std::to_string(targets[a]) + " out of range");
    for (std::size_t b = a + 1; b < k; ++b)
      if (targets[a] == targets[b]) throw Error("repeated target qubit");
  }
  const double dev = unitarity_deviation(gate);
  if (dev > 1e-10) throw Error("gate is not unitary (max |U^H U - I| = " + std::to_string(dev) + ")");

  const std::size_t dim = std::size_t{1} << total_qubits;
  std::size_t target_mask = 0;
  for (auto t : targets) target_mask |= std::size_t{1} << (total_qubits - 1 - t);
  auto local = [&](std::size_t index) {
    std::size_t s = 0;
    for (auto t : targets) s = (s << 1) | ((index >> (total_qubits - 1 - t)) & 1U);
    return s;
  };

  ComplexMatrix full(dim);
  for (std::size_t row = 0; row < dim; ++row)
    for (std::size_t col = 0; col < dim; ++col)
      if ((row & ~target_mask) == (col & ~target_mask))
        full(row, col) = gate(local(row), local(col));
  return full;
}

}  // namespace qrec::qlang
