#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace minsurf {

// Small expression language for user-defined immersion components.
// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := Number | Ident | Ident "(" expr ")" | "(" expr ")"
// "^" is right-associative; unary minus binds looser than "^".

enum class TokenKind {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  Comma,
  End,
};

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t offset;
};

std::vector<Token> tokenize(const std::string& src);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Constant, Variable, NamedConst, Unary, Binary, Call };
  Kind kind;
  double number = 0.0;      // Constant
  std::string name;         // Variable / NamedConst / Call function / Binary op symbol
  char op = 0;              // Binary: one of + - * / ^ ; Unary is always negation
  ExprPtr left, right;      // Binary children; Unary/Call use left only
};

ExprPtr parse(const std::vector<Token>& tokens);
ExprPtr parse(const std::string& src);

struct Env {
  double u = 0.0, v = 0.0, z = 0.0;
  std::map<std::string, double> constants;

  static Env with_defaults();  // pi, e
};

double eval(const Expr& e, const Env& env);
inline double eval(const ExprPtr& e, const Env& env) { return eval(*e, env); }

std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

bool structurally_equal(const Expr& a, const Expr& b);

bool is_known_function(const std::string& name);

}  // namespace minsurf
