#pragma once

// JSON forms:
//   matrix / operator   {"dim": n, "re": [[...]], "im": [[...]]}   (row-major)
//   interval            {"lo": x, "hi": y}
//   expectation         interval fields plus "e0", "missing", "m", "M"
//   run report          {"output", "iterations_per_loop", "residual",
//                        "converged", "chain_trace_log"}

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrec/error.hpp"
#include "qrec/intervals.hpp"
#include "qrec/linalg.hpp"
#include "qrec/observables.hpp"
#include "qrec/partial_density.hpp"
#include "qrec/qlang/interpreter.hpp"

namespace qrec {

using json = nlohmann::json;

inline json to_json(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  json re = json::array(), im = json::array();
  for (std::size_t r = 0; r < n; ++r) {
    json rr = json::array(), ir = json::array();
    for (std::size_t c = 0; c < n; ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"dim", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

/// Parses the matrix form. "im" may be omitted for real matrices.
inline ComplexMatrix matrix_from_json(const json& j) {
  try {
    const auto n = j.at("dim").get<std::size_t>();
    if (n == 0) throw Error("matrix JSON: dim must be positive");
    const json& re = j.at("re");
    const json* im = j.contains("im") ? &j.at("im") : nullptr;
    auto check_rows = [n](const json& rows, const char* name) {
      if (!rows.is_array() || rows.size() != n)
        throw Error(std::string("matrix JSON: \"") + name + "\" must have " + std::to_string(n) + " rows");
      for (const auto& row : rows)
        if (!row.is_array() || row.size() != n)
          throw Error(std::string("matrix JSON: every row of \"") + name + "\" must have " +
                      std::to_string(n) + " entries");
    };
    check_rows(re, "re");
    if (im) check_rows(*im, "im");
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        m(r, c) = Complex(re[r][c].get<double>(), im ? (*im)[r][c].get<double>() : 0.0);
    if (!m.is_finite()) throw Error("matrix JSON: non-finite entry");
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("matrix JSON: ") + e.what());
  }
}

inline json to_json(const PartialDensityOperator& f) { return to_json(f.matrix()); }

inline PartialDensityOperator partial_density_from_json(const json& j, const Tolerances& tol = {}) {
  return PartialDensityOperator(matrix_from_json(j), tol);
}

inline json to_json(const CompactInterval& a) { return {{"lo", a.lo()}, {"hi", a.hi()}}; }

inline CompactInterval interval_from_json(const json& j) {
  try {
    return {j.at("lo").get<double>(), j.at("hi").get<double>()};
  } catch (const json::exception& e) {
    throw Error(std::string("interval JSON: ") + e.what());
  }
}

inline json to_json(const Expectation& e) {
  json j = to_json(e.interval);
  j["e0"] = e.e0;
  j["missing"] = e.missing;
  j["m"] = e.m;
  j["M"] = e.M;
  return j;
}

inline json to_json(const qlang::RunReport& r) {
  return {{"output", to_json(r.output)},
          {"iterations_per_loop", r.iterations_per_loop},
          {"residual", r.residual},
          {"converged", r.converged},
          {"chain_trace_log", r.chain_trace_log}};
}

}  // namespace qrec
