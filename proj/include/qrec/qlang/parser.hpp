#pragma once

// Recursive-descent parser for the while-language.
//
//   program := decl* stmt*
//   decl    := "qubit" IDENT ";"
//   stmt    := "skip" ";"
//            | GATE IDENT+ ";"
//            | "matrix" "[" row ("," row)* "]" IDENT+ ";"
//            | "if" guard "{" stmt* "}" ["else" "{" stmt* "}"]
//            | "while" guard "{" stmt* "}"
//   guard   := IDENT "in" KET          KET in { |0>, |1>, |+>, |-> }
//   row     := "[" complex ("," complex)* "]"
//
// Complex literals are sums of real and imaginary terms: 1, -0.5, 2i, i,
// 0.5-0.5i. Comments run from "//" or "#" to the end of the line.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/linalg.hpp"
#include "qrec/qlang/ast.hpp"
#include "qrec/qlang/gates.hpp"
#include "qrec/quantum_logic.hpp"

namespace qrec::qlang {

class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

enum class Tok { ident, number, ket, semicolon, lbrace, rbrace, lbracket, rbracket, comma, plus, minus, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      out.push_back({Tok::number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (c == '|') {
      if (i + 2 < src.size() && src[i + 2] == '>' &&
          std::string_view("01+-").find(src[i + 1]) != std::string_view::npos) {
        out.push_back({Tok::ket, std::string(1, src[i + 1]), l, cl});
        advance(3);
        continue;
      }
      throw ParseError(l, cl, "malformed ket; expected |0>, |1>, |+> or |->");
    }
    Tok kind;
    switch (c) {
      case ';': kind = Tok::semicolon; break;
      case '{': kind = Tok::lbrace; break;
      case '}': kind = Tok::rbrace; break;
      case '[': kind = Tok::lbracket; break;
      case ']': kind = Tok::rbracket; break;
      case ',': kind = Tok::comma; break;
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      default: throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  Program parse() {
    Program prog;
    while (is_ident("qubit")) {
      const Token kw = take();
      const Token name = expect(Tok::ident, "register name");
      if (registers_.count(name.text))
        throw ParseError(name.line, name.column, "register '" + name.text + "' declared twice");
      if (qubits_ + 1 > max_qubits)
        throw ParseError(kw.line, kw.column,
                         "too many qubits: at most " + std::to_string(max_qubits) + " are supported");
      registers_[name.text] = qubits_++;
      prog.declarations.emplace_back(name.text, 1);
      expect(Tok::semicolon, "';'");
    }
    if (qubits_ == 0) {
      const Token& t = peek();
      throw ParseError(t.line, t.column, "program declares no qubits");
    }
    while (peek().kind != Tok::end) prog.body.body.push_back(statement());
    return prog;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  bool is_ident(std::string_view word) const {
    return peek().kind == Tok::ident && peek().text == word;
  }

  Token expect(Tok kind, const std::string& what) {
    const Token& t = peek();
    if (t.kind != kind)
      throw ParseError(t.line, t.column,
                       "expected " + what + (t.kind == Tok::end ? " but reached end of input"
                                                                : " but found '" + t.text + "'"));
    return take();
  }

  std::size_t qubit(const Token& t) const {
    auto it = registers_.find(t.text);
    if (it == registers_.end()) throw ParseError(t.line, t.column, "unknown register '" + t.text + "'");
    return it->second;
  }

  Seq block() {
    expect(Tok::lbrace, "'{'");
    Seq seq;
    while (peek().kind != Tok::rbrace) {
      if (peek().kind == Tok::end) expect(Tok::rbrace, "'}'");
      seq.body.push_back(statement());
    }
    take();
    return seq;
  }

  ClosedSubspace guard() {
    const Token name = expect(Tok::ident, "register name");
    const std::size_t q = qubit(name);
    const Token in = expect(Tok::ident, "'in'");
    if (in.text != "in") throw ParseError(in.line, in.column, "expected 'in' but found '" + in.text + "'");
    const Token ket = expect(Tok::ket, "ket");

    const double r = 1.0 / std::sqrt(2.0);
    Complex amp[2];
    switch (ket.text[0]) {
      case '0': amp[0] = 1.0; amp[1] = 0.0; break;
      case '1': amp[0] = 0.0; amp[1] = 1.0; break;
      case '+': amp[0] = r; amp[1] = r; break;
      default: amp[0] = r; amp[1] = -r; break;
    }
    const std::size_t dim = std::size_t{1} << qubits_;
    const std::size_t bit = std::size_t{1} << (qubits_ - 1 - q);
    std::vector<Vector> basis;
    for (std::size_t rest = 0; rest < dim; ++rest) {
      if (rest & bit) continue;
      Vector v(dim);
      v[rest] = amp[0];
      v[rest | bit] = amp[1];
      basis.push_back(std::move(v));
    }
    return ClosedSubspace::from_orthonormal(std::move(basis), dim);
  }

  Complex complex_literal() {
    Complex value{};
    bool any = false;
    for (;;) {
      double sign = 1.0;
      if (peek().kind == Tok::plus || peek().kind == Tok::minus) {
        if (take().kind == Tok::minus) sign = -1.0;
      } else if (any) {
        break;
      }
      const Token t = peek();
      if (t.kind == Tok::number) {
        take();
        double x;
        try {
          std::size_t used = 0;
          x = std::stod(t.text, &used);
          if (used != t.text.size()) throw std::invalid_argument(t.text);
        } catch (const std::exception&) {
          throw ParseError(t.line, t.column, "malformed number '" + t.text + "'");
        }
        if (is_ident("i")) {
          take();
          value += Complex(0.0, sign * x);
        } else {
          value += sign * x;
        }
      } else if (t.kind == Tok::ident && t.text == "i") {
        take();
        value += Complex(0.0, sign);
      } else {
        throw ParseError(t.line, t.column, "expected a complex number");
      }
      any = true;
    }
    return value;
  }

  ComplexMatrix matrix_literal() {
    const Token open = expect(Tok::lbracket, "'['");
    std::vector<std::vector<Complex>> rows;
    do {
      expect(Tok::lbracket, "'['");
      std::vector<Complex> row{complex_literal()};
      while (peek().kind == Tok::comma) {
        take();
        row.push_back(complex_literal());
      }
      expect(Tok::rbracket, "']'");
      rows.push_back(std::move(row));
    } while (peek().kind == Tok::comma && (take(), true));
    expect(Tok::rbracket, "']'");
    const std::size_t n = rows.size();
    std::vector<Complex> entries;
    for (const auto& row : rows) {
      if (row.size() != n) throw ParseError(open.line, open.column, "inline matrix is not square");
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(n, std::move(entries));
  }

  Statement apply(const Token& at, std::string name, const ComplexMatrix& gate) {
    std::vector<std::size_t> targets;
    while (peek().kind == Tok::ident) targets.push_back(qubit(take()));
    if (targets.empty()) {
      const Token& t = peek();
      throw ParseError(t.line, t.column, "gate '" + name + "' needs at least one target");
    }
    expect(Tok::semicolon, "';'");
    try {
      return {ApplyUnitary{std::move(name), targets, denote_unitary(gate, targets, qubits_)}};
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(at.line, at.column, e.what());
    }
  }

  Statement statement() {
    const Token t = peek();
    if (t.kind != Tok::ident) throw ParseError(t.line, t.column, "expected a statement but found '" + t.text + "'");
    take();
    if (t.text == "skip") {
      expect(Tok::semicolon, "';'");
      return {Skip{}};
    }
    if (t.text == "if") {
      ClosedSubspace g = guard();
      Seq then_body = block();
      Seq else_body;
      if (is_ident("else")) {
        take();
        else_body = block();
      }
      return {Branch{std::move(g), std::move(then_body), std::move(else_body)}};
    }
    if (t.text == "while") {
      ClosedSubspace g = guard();
      return {While{std::move(g), block()}};
    }
    if (t.text == "qubit") throw ParseError(t.line, t.column, "declarations must precede statements");
    if (t.text == "matrix") return apply(t, "matrix", matrix_literal());
    if (auto gate = named_gate(t.text)) return apply(t, t.text, *gate);
    throw ParseError(t.line, t.column, "unknown gate '" + t.text + "'");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> registers_;
  std::size_t qubits_ = 0;
};

}  // namespace detail

inline Program parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace qrec::qlang
