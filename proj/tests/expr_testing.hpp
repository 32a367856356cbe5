// Shared helpers for exercising the expression language: an independent
// shunting-yard evaluator used as an oracle, and a seeded random AST
// generator for round-trip / agreement sweeps.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "minsurf/expr.hpp"

namespace expr_testing {

// Independent of the library's parser/evaluator: shunting-yard to RPN, then
// a stack machine.  Domain violations surface as NaN/inf rather than errors;
// `saw_nonfinite` reports whether any intermediate value was non-finite
// (later operations may collapse an inf back to a finite number, which the
// library instead reports as an evaluation error).
inline double oracle_eval(const std::string& src, const minsurf::Env& env,
                          bool* saw_nonfinite = nullptr) {
  using minsurf::Token;
  using minsurf::TokenKind;
  const std::vector<Token> tokens = minsurf::tokenize(src);

  struct Op {
    char symbol;   // + - * / ^ or 'u' for unary minus, 'f' for a function
    std::string fn;
  };
  auto prec = [](char s) { return s == '^' ? 4 : s == 'u' ? 3 : (s == '*' || s == '/') ? 2 : 1; };
  auto right_assoc = [](char s) { return s == '^' || s == 'u'; };

  std::vector<Op> ops;
  struct RpnItem {
    char kind;  // 'n' number, 'v' name, 'o' operator, 'f' function
    double number = 0.0;
    char symbol = 0;
    std::string name;
  };
  std::vector<RpnItem> rpn;

  bool prefix = true;  // next +/- would be unary
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    switch (t.kind) {
      case TokenKind::Number:
        rpn.push_back({'n', std::stod(t.lexeme), 0, ""});
        prefix = false;
        break;
      case TokenKind::Ident:
        if (i + 1 < tokens.size() && tokens[i + 1].kind == TokenKind::LParen) {
          ops.push_back({'f', t.lexeme});
        } else {
          rpn.push_back({'v', 0.0, 0, t.lexeme});
          prefix = false;
        }
        break;
      case TokenKind::Minus:
        if (prefix) {
          ops.push_back({'u', ""});  // prefix ops never pop
          break;
        }
        [[fallthrough]];
      case TokenKind::Plus:
      case TokenKind::Star:
      case TokenKind::Slash:
      case TokenKind::Caret: {
        const char s = t.kind == TokenKind::Plus    ? '+'
                       : t.kind == TokenKind::Minus ? '-'
                       : t.kind == TokenKind::Star  ? '*'
                       : t.kind == TokenKind::Slash ? '/'
                                                    : '^';
        while (!ops.empty() && ops.back().symbol != '(' && ops.back().symbol != 'f' &&
               (prec(ops.back().symbol) > prec(s) ||
                (prec(ops.back().symbol) == prec(s) && !right_assoc(s))))
        {
          rpn.push_back({'o', 0.0, ops.back().symbol, ""});
          ops.pop_back();
        }
        ops.push_back({s, ""});
        prefix = true;
        break;
      }
      case TokenKind::LParen:
        ops.push_back({'(', ""});
        prefix = true;
        break;
      case TokenKind::RParen:
        while (!ops.empty() && ops.back().symbol != '(') {
          rpn.push_back({'o', 0.0, ops.back().symbol, ""});
          ops.pop_back();
        }
        if (ops.empty()) throw std::runtime_error("oracle: unbalanced parens");
        ops.pop_back();
        if (!ops.empty() && ops.back().symbol == 'f') {
          rpn.push_back({'f', 0.0, 0, ops.back().fn});
          ops.pop_back();
        }
        prefix = false;
        break;
      case TokenKind::Comma:
        throw std::runtime_error("oracle: unexpected comma");
      case TokenKind::End:
        break;
    }
  }
  while (!ops.empty()) {
    if (ops.back().symbol == '(') throw std::runtime_error("oracle: unbalanced parens");
    rpn.push_back({ops.back().symbol == 'f' ? 'f' : 'o', 0.0, ops.back().symbol,
                   ops.back().fn});
    ops.pop_back();
  }

  static const std::map<std::string, double (*)(double)> fns = {
      {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},  {"exp", std::exp},
      {"log", std::log},   {"sqrt", std::sqrt}, {"sinh", std::sinh},
      {"cosh", std::cosh}, {"tanh", std::tanh}, {"atan", std::atan},
      {"abs", std::fabs},
  };

  if (saw_nonfinite) *saw_nonfinite = false;
  std::vector<double> stack;
  auto pop = [&]() {
    if (stack.empty()) throw std::runtime_error("oracle: stack underflow");
    const double x = stack.back();
    stack.pop_back();
    return x;
  };
  auto note = [&](double x) {
    if (saw_nonfinite && !std::isfinite(x)) *saw_nonfinite = true;
    return x;
  };
  for (const RpnItem& item : rpn) {
    switch (item.kind) {
      case 'n':
        stack.push_back(item.number);
        break;
      case 'v': {
        if (item.name == "u") stack.push_back(env.u);
        else if (item.name == "v") stack.push_back(env.v);
        else if (item.name == "z") stack.push_back(env.z);
        else {
          const auto it = env.constants.find(item.name);
          if (it == env.constants.end())
            throw std::runtime_error("oracle: unbound name " + item.name);
          stack.push_back(it->second);
        }
        break;
      }
      case 'o': {
        if (item.symbol == 'u') {
          stack.push_back(-pop());
          break;
        }
        const double b = pop(), a = pop();
        switch (item.symbol) {
          case '+': stack.push_back(note(a + b)); break;
          case '-': stack.push_back(note(a - b)); break;
          case '*': stack.push_back(note(a * b)); break;
          case '/': stack.push_back(note(a / b)); break;
          case '^': stack.push_back(note(std::pow(a, b))); break;
        }
        break;
      }
      case 'f': {
        const auto it = fns.find(item.name);
        if (it == fns.end()) throw std::runtime_error("oracle: unknown function " + item.name);
        stack.push_back(note(it->second(pop())));
        break;
      }
    }
  }
  if (stack.size() != 1) throw std::runtime_error("oracle: leftover operands");
  return stack.back();
}

// Seeded random AST generator.  Constants are non-negative (a printed "-2"
// reparses as unary minus, which would break structural round-trips).
class RandomExpr {
 public:
  explicit RandomExpr(std::uint32_t seed) : rng_(seed) {}

  minsurf::ExprPtr make(int depth = 0) {
    using minsurf::Expr;
    auto node = std::make_shared<Expr>();
    const int roll = depth >= 4 ? pick(3) : pick(10);
    if (roll < 2) {  // constant
      node->kind = Expr::Kind::Constant;
      node->number = constant();
    } else if (roll < 3) {  // variable or named constant
      static const char* names[] = {"u", "v", "z", "pi", "e"};
      const int k = pick(5);
      node->kind = k < 3 ? Expr::Kind::Variable : Expr::Kind::NamedConst;
      node->name = names[k];
    } else if (roll < 4) {  // unary minus
      node->kind = Expr::Kind::Unary;
      node->left = make(depth + 1);
    } else if (roll < 5) {  // function call
      static const char* fns[] = {"sin", "cos", "tan",  "exp",  "sqrt", "sinh",
                                  "cosh", "tanh", "atan", "abs", "log"};
      node->kind = Expr::Kind::Call;
      node->name = fns[pick(11)];
      node->left = make(depth + 1);
    } else {  // binary
      static const char ops[] = {'+', '-', '*', '/', '^'};
      node->kind = Expr::Kind::Binary;
      node->op = ops[pick(5)];
      node->left = make(depth + 1);
      node->right = node->op == '^' ? small_exponent() : make(depth + 1);
    }
    return node;
  }

 private:
  std::mt19937 rng_;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  double constant() {
    switch (pick(3)) {
      case 0: return pick(10);
      case 1: return std::uniform_real_distribution<double>(0.0, 4.0)(rng_);
      default: return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) * 1e-3;
    }
  }

  // keep powers tame so agreement sweeps stay in floating-point range;
  // exponent 0 is excluded because IEEE pow(NaN, 0) == 1 would let the
  // oracle absorb a domain error the library reports
  minsurf::ExprPtr small_exponent() {
    auto node = std::make_shared<minsurf::Expr>();
    node->kind = minsurf::Expr::Kind::Constant;
    node->number = 1 + pick(3);
    return node;
  }
};

}  // namespace expr_testing
