#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qpart/circuit.hpp"
#include "qpart/errors.hpp"

namespace qpart {

// Supported gate vocabulary: qubit arity and parameter count.
struct GateSignature {
  int arity;
  int num_params;
};

inline const std::map<std::string, GateSignature, std::less<>>& gate_vocabulary() {
  static const std::map<std::string, GateSignature, std::less<>> table = {
      {"h", {1, 0}},    {"x", {1, 0}},    {"y", {1, 0}},     {"z", {1, 0}},
      {"s", {1, 0}},    {"sdg", {1, 0}},  {"t", {1, 0}},     {"tdg", {1, 0}},
      {"rx", {1, 1}},   {"ry", {1, 1}},   {"rz", {1, 1}},    {"u", {1, 3}},
      {"cx", {2, 0}},   {"cz", {2, 0}},   {"cp", {2, 1}},    {"crz", {2, 1}},
      {"swap", {2, 0}}, {"ccx", {3, 0}},  {"cswap", {3, 0}},
  };
  return table;
}

namespace detail {

enum class TokKind { Ident, Number, Symbol, String, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= text_.size()) {
      tok.kind = TokKind::End;
      return tok;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok.kind = TokKind::Ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        tok.text += take();
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      tok.kind = TokKind::Number;
      bool seen_exp = false;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.') {
          tok.text += take();
        } else if ((d == 'e' || d == 'E') && !seen_exp) {
          seen_exp = true;
          tok.text += take();
          if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) tok.text += take();
        } else {
          break;
        }
      }
      return tok;
    }
    if (c == '"') {
      tok.kind = TokKind::String;
      take();
      while (pos_ < text_.size() && text_[pos_] != '"') tok.text += take();
      if (pos_ >= text_.size()) throw ParseError("unterminated string literal", tok.line, tok.column);
      take();
      return tok;
    }
    tok.kind = TokKind::Symbol;
    tok.text = std::string(1, take());
    return tok;
  }

 private:
  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// Evaluates k*pi/m exactly the way the emitter probes candidates, so that
// symbolic angles survive a write/parse round trip bit-for-bit.
inline double pi_fraction(double k, double m) { return (k * M_PI) / m; }

}  // namespace detail

// Parses the supported OpenQASM 2.0 subset. Multiple quantum registers are
// flattened into one zero-based index space in declaration order. `creg`,
// `measure`, `barrier` and `if(...)` statements are accepted and dropped.
inline Circuit parse_qasm(const std::string& text) {
  using detail::TokKind;
  using detail::Token;

  detail::Lexer lexer(text);
  Token tok = lexer.next();

  auto advance = [&]() { tok = lexer.next(); };
  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, tok.line, tok.column); };
  auto expect_symbol = [&](char c) {
    if (tok.kind != TokKind::Symbol || tok.text[0] != c)
      fail(std::string("expected '") + c + "'");
    advance();
  };
  auto expect_ident = [&]() {
    if (tok.kind != TokKind::Ident) fail("expected identifier");
    std::string name = tok.text;
    advance();
    return name;
  };
  auto expect_uint = [&]() {
    if (tok.kind != TokKind::Number || tok.text.find_first_not_of("0123456789") != std::string::npos)
      fail("expected unsigned integer");
    long v = std::strtol(tok.text.c_str(), nullptr, 10);
    advance();
    return v;
  };
  auto skip_statement = [&]() {
    while (!(tok.kind == TokKind::Symbol && tok.text[0] == ';')) {
      if (tok.kind == TokKind::End) fail("unterminated statement, expected ';'");
      advance();
    }
    advance();
  };

  // OPENQASM 2.0;
  if (tok.kind != TokKind::Ident || tok.text != "OPENQASM") fail("missing 'OPENQASM 2.0;' header");
  advance();
  if (tok.kind != TokKind::Number || tok.text != "2.0") fail("only OpenQASM version 2.0 is supported");
  advance();
  expect_symbol(';');

  struct Register {
    std::string name;
    int offset;
    int size;
  };
  std::vector<Register> qregs;
  std::vector<std::string> cregs;
  auto find_qreg = [&](const std::string& name) -> const Register* {
    for (const Register& r : qregs)
      if (r.name == name) return &r;
    return nullptr;
  };

  Circuit circuit;
  int total_qubits = 0;

  auto parse_param = [&]() -> double {
    double sign = 1.0;
    if (tok.kind == TokKind::Symbol && (tok.text[0] == '-' || tok.text[0] == '+')) {
      if (tok.text[0] == '-') sign = -1.0;
      advance();
    }
    if (tok.kind == TokKind::Number) {
      std::string digits = tok.text;
      Token saved = tok;
      advance();
      if (tok.kind == TokKind::Symbol && tok.text[0] == '*') {
        // k*pi or k*pi/m
        if (digits.find_first_not_of("0123456789") != std::string::npos)
          throw ParseError("pi-expression numerator must be an integer", saved.line, saved.column);
        advance();
        if (tok.kind != TokKind::Ident || tok.text != "pi") fail("expected 'pi' after '*'");
        advance();
        double m = 1.0;
        if (tok.kind == TokKind::Symbol && tok.text[0] == '/') {
          advance();
          m = static_cast<double>(expect_uint());
          if (m == 0.0) fail("division by zero in angle expression");
        }
        return sign * detail::pi_fraction(std::strtod(digits.c_str(), nullptr), m);
      }
      return sign * std::strtod(digits.c_str(), nullptr);
    }
    if (tok.kind == TokKind::Ident && tok.text == "pi") {
      advance();
      double m = 1.0;
      if (tok.kind == TokKind::Symbol && tok.text[0] == '/') {
        advance();
        m = static_cast<double>(expect_uint());
        if (m == 0.0) fail("division by zero in angle expression");
      }
      return sign * detail::pi_fraction(1.0, m);
    }
    fail("expected numeric literal or pi-expression");
    return 0.0;
  };

  while (tok.kind != TokKind::End) {
    if (tok.kind != TokKind::Ident) fail("expected statement");
    const std::string head = tok.text;
    const Token head_tok = tok;

    if (head == "include") {
      advance();
      if (tok.kind != TokKind::String) fail("expected include file string");
      if (tok.text != "qelib1.inc")
        throw ParseError("unsupported construct: include \"" + tok.text + "\"", head_tok.line, head_tok.column);
      advance();
      expect_symbol(';');
    } else if (head == "qreg" || head == "creg") {
      advance();
      std::string name = expect_ident();
      expect_symbol('[');
      long size = expect_uint();
      expect_symbol(']');
      expect_symbol(';');
      if (head == "qreg") {
        if (size < 1) throw ParseError("quantum register '" + name + "' must have positive size",
                                       head_tok.line, head_tok.column);
        if (find_qreg(name))
          throw ParseError("duplicate register '" + name + "'", head_tok.line, head_tok.column);
        qregs.push_back({name, total_qubits, static_cast<int>(size)});
        total_qubits += static_cast<int>(size);
      } else {
        cregs.push_back(name);
      }
    } else if (head == "measure" || head == "barrier" || head == "if") {
      skip_statement();
    } else if (head == "gate" || head == "opaque" || head == "reset") {
      throw ParseError("unsupported construct: " + head, head_tok.line, head_tok.column);
    } else {
      // Gate application.
      auto it = gate_vocabulary().find(head);
      if (it == gate_vocabulary().end())
        throw ParseError("unsupported construct: gate '" + head + "'", head_tok.line, head_tok.column);
      const GateSignature sig = it->second;
      advance();

      Gate gate;
      gate.name = head;
      if (tok.kind == TokKind::Symbol && tok.text[0] == '(') {
        advance();
        if (!(tok.kind == TokKind::Symbol && tok.text[0] == ')')) {
          gate.params.push_back(parse_param());
          while (tok.kind == TokKind::Symbol && tok.text[0] == ',') {
            advance();
            gate.params.push_back(parse_param());
          }
        }
        expect_symbol(')');
      }
      if (static_cast<int>(gate.params.size()) != sig.num_params)
        throw ParseError("gate '" + head + "' expects " + std::to_string(sig.num_params) +
                             " parameter(s), got " + std::to_string(gate.params.size()),
                         head_tok.line, head_tok.column);

      while (true) {
        Token operand_tok = tok;
        std::string reg = expect_ident();
        const Register* r = find_qreg(reg);
        if (!r) {
          for (const std::string& cname : cregs)
            if (cname == reg)
              throw ParseError("gate operand '" + reg + "' is a classical register",
                               operand_tok.line, operand_tok.column);
          throw ParseError("undeclared register '" + reg + "'", operand_tok.line, operand_tok.column);
        }
        if (!(tok.kind == TokKind::Symbol && tok.text[0] == '['))
          throw ParseError("unsupported construct: whole-register gate application",
                           operand_tok.line, operand_tok.column);
        advance();
        long idx = expect_uint();
        expect_symbol(']');
        if (idx >= r->size)
          throw ParseError("qubit " + reg + "[" + std::to_string(idx) + "] out of range for register of size " +
                               std::to_string(r->size),
                           operand_tok.line, operand_tok.column);
        gate.qubits.push_back(r->offset + static_cast<int>(idx));
        if (tok.kind == TokKind::Symbol && tok.text[0] == ',') {
          advance();
          continue;
        }
        break;
      }
      expect_symbol(';');

      if (static_cast<int>(gate.qubits.size()) != sig.arity)
        throw ParseError("gate '" + head + "' expects " + std::to_string(sig.arity) + " qubit(s), got " +
                             std::to_string(gate.qubits.size()),
                         head_tok.line, head_tok.column);
      for (std::size_t i = 0; i < gate.qubits.size(); ++i)
        for (std::size_t j = i + 1; j < gate.qubits.size(); ++j)
          if (gate.qubits[i] == gate.qubits[j])
            throw ParseError("gate '" + head + "' has duplicate qubit operands", head_tok.line, head_tok.column);

      circuit.gates.push_back(std::move(gate));
    }
  }

  if (total_qubits == 0)
    throw ParseError("program declares no quantum registers", tok.line, tok.column);
  circuit.num_qubits = total_qubits;
  return circuit;
}

namespace detail {

// Formats an angle, preferring an exact k*pi/m spelling when one reproduces
// the double bit-for-bit; otherwise falls back to a 17-digit decimal, which
// strtod round-trips exactly.
inline std::string format_param(double x) {
  if (x == 0.0) return "0";
  double ax = std::fabs(x);
  const char* sign = x < 0 ? "-" : "";
  static const std::vector<long long> denominators = [] {
    std::vector<long long> m = {1, 3, 5, 6, 12};
    for (int d = 1; d <= 62; ++d) m.push_back(1LL << d);  // covers pi/2^d ladders
    return m;
  }();
  for (int k = 1; k <= 16; ++k) {
    for (long long m : denominators) {
      if (pi_fraction(static_cast<double>(k), static_cast<double>(m)) == ax) {
        std::string out(sign);
        if (k != 1) out += std::to_string(k) + "*";
        out += "pi";
        if (m != 1) out += "/" + std::to_string(m);
        return out;
      }
    }
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

// Emits the circuit as OpenQASM 2.0 over a single register q[n].
// Throws std::invalid_argument for gates outside the supported vocabulary.
inline std::string write_qasm(const Circuit& c) {
  validate(c);
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << c.num_qubits << "];\n";
  for (const Gate& g : c.gates) {
    auto it = gate_vocabulary().find(g.name);
    if (it == gate_vocabulary().end())
      throw std::invalid_argument("cannot emit unsupported gate '" + g.name + "'");
    if (static_cast<int>(g.qubits.size()) != it->second.arity ||
        static_cast<int>(g.params.size()) != it->second.num_params)
      throw std::invalid_argument("gate '" + g.name + "' has a malformed operand or parameter list");
    out << g.name;
    if (!g.params.empty()) {
      out << '(';
      for (std::size_t i = 0; i < g.params.size(); ++i) {
        if (i) out << ',';
        out << detail::format_param(g.params[i]);
      }
      out << ')';
    }
    out << ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) out << ',';
      out << "q[" << g.qubits[i] << ']';
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace qpart
