#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "qberry/errors.hpp"
#include "qberry/gates.hpp"
#include "qberry/state.hpp"

namespace qberry {

// Text of the two preparation circuits. The first yields
// cos(t/2)|0> + sin(t/2)e^{-i phi}|1> (times e^{i t/2}), the second
// cos(t)|0> + sin(t)e^{i phi}|1> (times e^{i t}).
inline constexpr std::string_view kSpinorCircuit = "H P(theta) H P(pi/2 - phi)";
inline constexpr std::string_view kGeneralQubitCircuit = "H P(2*theta) H P(pi/2 + phi)";

using Bindings = std::map<std::string, double>;

namespace detail {
struct ExprNode;
}

/// Immutable arithmetic expression over the symbols theta and phi.
/// Constant subtrees are folded at construction.
class Expr {
 public:
  enum class Op { Add, Sub, Mul, Div };

  static Expr number(double v);
  static Expr symbol(std::string name);
  static Expr negate(Expr e);
  // Throws InvalidInputError on a divisor that folds to zero.
  static Expr binary(Op op, Expr lhs, Expr rhs);

  std::optional<double> constant() const;
  double evaluate(const Bindings& bindings) const;
  void collect_symbols(std::set<std::string>& out) const;
  // Fully parenthesized; numbers print with round-trip precision.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const detail::ExprNode> node_;
};

namespace detail {

struct NumberNode {
  double value;
  bool operator==(const NumberNode&) const = default;
};
struct SymbolNode {
  std::string name;
  bool operator==(const SymbolNode&) const = default;
};
struct NegateNode {
  Expr operand;
  bool operator==(const NegateNode&) const = default;
};
struct BinaryNode {
  Expr::Op op;
  Expr lhs;
  Expr rhs;
  bool operator==(const BinaryNode&) const = default;
};
struct ExprNode {
  std::variant<NumberNode, SymbolNode, NegateNode, BinaryNode> v;
};

inline double apply_op(Expr::Op op, double l, double r) {
  switch (op) {
    case Expr::Op::Add: return l + r;
    case Expr::Op::Sub: return l - r;
    case Expr::Op::Mul: return l * r;
    case Expr::Op::Div: return l / r;
  }
  return 0.0;
}

}  // namespace detail

inline bool operator==(const Expr& a, const Expr& b) { return a.node_->v == b.node_->v; }

inline Expr Expr::number(double v) {
  return Expr(std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::NumberNode{v}}));
}

inline Expr Expr::symbol(std::string name) {
  return Expr(std::make_shared<const detail::ExprNode>(
      detail::ExprNode{detail::SymbolNode{std::move(name)}}));
}

inline Expr Expr::negate(Expr e) {
  if (auto v = e.constant()) return number(-*v);
  return Expr(std::make_shared<const detail::ExprNode>(
      detail::ExprNode{detail::NegateNode{std::move(e)}}));
}

inline Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  const auto l = lhs.constant();
  const auto r = rhs.constant();
  if (op == Op::Div && r && *r == 0.0) throw InvalidInputError("division by zero");
  if (l && r) return number(detail::apply_op(op, *l, *r));
  return Expr(std::make_shared<const detail::ExprNode>(
      detail::ExprNode{detail::BinaryNode{op, std::move(lhs), std::move(rhs)}}));
}

inline std::optional<double> Expr::constant() const {
  if (const auto* n = std::get_if<detail::NumberNode>(&node_->v)) return n->value;
  return std::nullopt;
}

inline double Expr::evaluate(const Bindings& bindings) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, detail::NumberNode>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, detail::SymbolNode>) {
          const auto it = bindings.find(n.name);
          if (it == bindings.end()) throw UnboundSymbolError("unbound symbol '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, detail::NegateNode>) {
          return -n.operand.evaluate(bindings);
        } else {
          const double r = n.rhs.evaluate(bindings);
          if (n.op == Op::Div && r == 0.0) throw InvalidInputError("division by zero");
          return detail::apply_op(n.op, n.lhs.evaluate(bindings), r);
        }
      },
      node_->v);
}

inline void Expr::collect_symbols(std::set<std::string>& out) const {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, detail::SymbolNode>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, detail::NegateNode>) {
          n.operand.collect_symbols(out);
        } else if constexpr (std::is_same_v<T, detail::BinaryNode>) {
          n.lhs.collect_symbols(out);
          n.rhs.collect_symbols(out);
        }
      },
      node_->v);
}

inline std::string Expr::to_string() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, detail::NumberNode>) {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.17g", std::abs(n.value));
          return std::signbit(n.value) ? "(-" + std::string(buf) + ")" : std::string(buf);
        } else if constexpr (std::is_same_v<T, detail::SymbolNode>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, detail::NegateNode>) {
          return "(-" + n.operand.to_string() + ")";
        } else {
          static constexpr const char* kOps[] = {" + ", " - ", " * ", " / "};
          return "(" + n.lhs.to_string() + kOps[static_cast<int>(n.op)] + n.rhs.to_string() + ")";
        }
      },
      node_->v);
}

/// A gate whose phase angle may still depend on free symbols.
struct GateOp {
  GateKind kind = GateKind::Hadamard;
  std::optional<Expr> angle;  // engaged iff kind == Phase

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

struct Circuit {
  std::vector<GateOp> gates;
  std::set<std::string> free_symbols;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

namespace detail {

class CircuitParser {
 public:
  explicit CircuitParser(std::string_view text) : text_(text) {}

  // A standalone constant expression such as "pi/2"; symbols are rejected.
  double parse_constant() {
    Expr e = expr();
    const Token t = next();
    if (t.kind != Token::Kind::End) fail("syntax error at " + describe(t), t.line, t.col);
    const auto v = e.constant();
    if (!v) fail("expression must not contain theta or phi", 1, 1);
    return *v;
  }

  Circuit parse() {
    Circuit c;
    skip_blank();
    while (pos_ < text_.size()) {
      c.gates.push_back(gate());
      skip_blank();
    }
    if (c.gates.empty()) fail("empty circuit: expected at least one gate", line_, col_);
    for (const auto& g : c.gates) {
      if (g.angle) g.angle->collect_symbols(c.free_symbols);
    }
    return c;
  }

 private:
  struct Token {
    enum class Kind { Number, Ident, Punct, End } kind;
    std::string text;
    std::size_t line;
    std::size_t col;
  };

  [[noreturn]] static void fail(const std::string& msg, std::size_t line, std::size_t col) {
    throw ParseError(msg, line, col);
  }

  void advance_char() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (ch == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance_char();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance_char();
      } else {
        break;
      }
    }
  }

  Token peek() {
    const auto saved = std::tuple{pos_, line_, col_};
    Token t = next();
    std::tie(pos_, line_, col_) = saved;
    return t;
  }

  Token next() {
    skip_blank();
    Token t{Token::Kind::End, "", line_, col_};
    if (pos_ >= text_.size()) return t;
    const char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      t.kind = Token::Kind::Number;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        t.text += text_[pos_];
        advance_char();
      }
      // optional exponent
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t look = pos_ + 1;
        if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
        if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
          while (pos_ < look) {
            t.text += text_[pos_];
            advance_char();
          }
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            t.text += text_[pos_];
            advance_char();
          }
        }
      }
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      t.kind = Token::Kind::Ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        t.text += text_[pos_];
        advance_char();
      }
    } else {
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, ch);
      advance_char();
    }
    return t;
  }

  void expect(const std::string& punct) {
    const Token t = next();
    if (t.kind != Token::Kind::Punct || t.text != punct) {
      fail("expected '" + punct + "' but found " + describe(t), t.line, t.col);
    }
  }

  static std::string describe(const Token& t) {
    return t.kind == Token::Kind::End ? "end of input" : "token \"" + t.text + "\"";
  }

  GateOp gate() {
    const Token t = next();
    if (t.kind == Token::Kind::Ident && t.text == "H") return GateOp{GateKind::Hadamard, {}};
    if (t.kind == Token::Kind::Ident && t.text == "P") {
      expect("(");
      Expr e = expr();
      expect(")");
      return GateOp{GateKind::Phase, std::move(e)};
    }
    fail("syntax error at " + describe(t) + ": expected gate 'H' or 'P(expr)'", t.line, t.col);
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      const Token t = peek();
      if (t.kind != Token::Kind::Punct || (t.text != "+" && t.text != "-")) return lhs;
      next();
      Expr rhs = term();
      lhs = wrap_binary(t.text == "+" ? Expr::Op::Add : Expr::Op::Sub, std::move(lhs),
                        std::move(rhs), t);
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      const Token t = peek();
      if (t.kind != Token::Kind::Punct || (t.text != "*" && t.text != "/")) return lhs;
      next();
      Expr rhs = factor();
      lhs = wrap_binary(t.text == "*" ? Expr::Op::Mul : Expr::Op::Div, std::move(lhs),
                        std::move(rhs), t);
    }
  }

  static Expr wrap_binary(Expr::Op op, Expr lhs, Expr rhs, const Token& at) {
    try {
      return Expr::binary(op, std::move(lhs), std::move(rhs));
    } catch (const InvalidInputError& e) {
      fail(e.what(), at.line, at.col);
    }
  }

  Expr factor() {
    const Token t = next();
    switch (t.kind) {
      case Token::Kind::Number: {
        char* end = nullptr;
        const double v = std::strtod(t.text.c_str(), &end);
        if (end != t.text.c_str() + t.text.size() || !std::isfinite(v)) {
          fail("malformed number \"" + t.text + "\"", t.line, t.col);
        }
        return Expr::number(v);
      }
      case Token::Kind::Ident:
        if (t.text == "pi") return Expr::number(kPi);
        if (t.text == "theta" || t.text == "phi") return Expr::symbol(t.text);
        throw UnknownSymbolError("unknown symbol '" + t.text + "'", t.line, t.col);
      case Token::Kind::Punct:
        if (t.text == "-") return Expr::negate(factor());
        if (t.text == "(") {
          Expr e = expr();
          expect(")");
          return e;
        }
        break;
      case Token::Kind::End:
        break;
    }
    fail("syntax error at " + describe(t) + ": expected number, symbol, '-' or '('", t.line,
         t.col);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace detail

/// Parses the gate DSL: `gate+` where gate is `H` or `P(expr)`; `#` starts a
/// comment. Errors carry 1-based line and column.
inline Circuit parse_circuit(std::string_view text) {
  return detail::CircuitParser(text).parse();
}

/// Evaluates a constant expression in the DSL's arithmetic ("pi/2", "-1.5e-3").
inline double parse_constant_expression(std::string_view text) {
  return detail::CircuitParser(text).parse_constant();
}

inline Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open circuit file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str());
}

inline std::string to_string(const Circuit& c) {
  std::string out;
  for (const auto& g : c.gates) {
    if (!out.empty()) out += ' ';
    out += g.kind == GateKind::Hadamard ? "H" : "P(" + g.angle->to_string() + ")";
  }
  return out;
}

inline std::vector<Gate> bind(const Circuit& c, const Bindings& bindings) {
  std::vector<Gate> gates;
  gates.reserve(c.gates.size());
  for (const auto& g : c.gates) {
    gates.push_back(g.kind == GateKind::Hadamard ? Gate::hadamard()
                                                 : Gate::phase(g.angle->evaluate(bindings)));
  }
  return gates;
}

inline PureState run_circuit(const Circuit& c, const Bindings& bindings, const PureState& input) {
  for (const auto& sym : c.free_symbols) {
    if (!bindings.contains(sym)) throw UnboundSymbolError("unbound symbol '" + sym + "'");
  }
  PureState s = input;
  for (const Gate& g : bind(c, bindings)) s = apply_gate(g, s);
  return s;
}

}  // namespace qberry
