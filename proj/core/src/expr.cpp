#include "minsurf/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "minsurf/errors.hpp"

namespace minsurf {

namespace {

const std::map<std::string, double (*)(double)>& function_table() {
  static const std::map<std::string, double (*)(double)> table = {
      {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},  {"exp", std::exp},
      {"log", nullptr},    {"sqrt", nullptr},   {"sinh", std::sinh}, {"cosh", std::cosh},
      {"tanh", std::tanh}, {"atan", std::atan}, {"abs", std::fabs},
  };
  return table;
}

}  // namespace

bool is_known_function(const std::string& name) { return function_table().count(name) > 0; }

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i < n && src[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      if (i < n && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      const std::string lexeme = src.substr(start, i - start);
      char* end = nullptr;
      const double value = std::strtod(lexeme.c_str(), &end);
      if (end != lexeme.c_str() + lexeme.size() || !std::isfinite(value))
        throw LexError(start, "malformed number '" + lexeme + "'");
      out.push_back({TokenKind::Number, lexeme, start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      ++i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({TokenKind::Ident, src.substr(start, i - start), start});
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '+': kind = TokenKind::Plus; break;
      case '-': kind = TokenKind::Minus; break;
      case '*': kind = TokenKind::Star; break;
      case '/': kind = TokenKind::Slash; break;
      case '^': kind = TokenKind::Caret; break;
      case '(': kind = TokenKind::LParen; break;
      case ')': kind = TokenKind::RParen; break;
      case ',': kind = TokenKind::Comma; break;
      default: throw LexError(i, std::string("illegal character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), i});
    ++i;
  }
  out.push_back({TokenKind::End, "", n});
  return out;
}

namespace {

ExprPtr make_node(Expr node) { return std::make_shared<const Expr>(std::move(node)); }

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  ExprPtr run() {
    ExprPtr e = expr();
    if (peek().kind != TokenKind::End) throw ParseError(peek().offset, "end of input");
    return e;
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool match(TokenKind kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  ExprPtr expr() {
    ExprPtr left = term();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      const char op = advance().lexeme[0];
      Expr node{Expr::Kind::Binary};
      node.op = op;
      node.left = left;
      node.right = term();
      left = make_node(std::move(node));
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = factor();
    while (peek().kind == TokenKind::Star || peek().kind == TokenKind::Slash) {
      const char op = advance().lexeme[0];
      Expr node{Expr::Kind::Binary};
      node.op = op;
      node.left = left;
      node.right = factor();
      left = make_node(std::move(node));
    }
    return left;
  }

  ExprPtr factor() {
    if (match(TokenKind::Minus)) {
      Expr node{Expr::Kind::Unary};
      node.left = factor();
      return make_node(std::move(node));
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (match(TokenKind::Caret)) {
      Expr node{Expr::Kind::Binary};
      node.op = '^';
      node.left = base;
      node.right = factor();  // right-associative
      return make_node(std::move(node));
    }
    return base;
  }

  ExprPtr atom() {
    const Token& tok = peek();
    if (tok.kind == TokenKind::Number) {
      advance();
      Expr node{Expr::Kind::Constant};
      node.number = std::strtod(tok.lexeme.c_str(), nullptr);
      return make_node(std::move(node));
    }
    if (tok.kind == TokenKind::Ident) {
      advance();
      if (peek().kind == TokenKind::LParen) {
        if (!is_known_function(tok.lexeme)) throw UnknownFunction(tok.offset, tok.lexeme);
        advance();
        Expr node{Expr::Kind::Call};
        node.name = tok.lexeme;
        node.left = expr();
        if (!match(TokenKind::RParen)) throw ParseError(peek().offset, "')'");
        return make_node(std::move(node));
      }
      Expr node{tok.lexeme == "u" || tok.lexeme == "v" || tok.lexeme == "z"
                    ? Expr::Kind::Variable
                    : Expr::Kind::NamedConst};
      node.name = tok.lexeme;
      return make_node(std::move(node));
    }
    if (match(TokenKind::LParen)) {
      ExprPtr inner = expr();
      if (!match(TokenKind::RParen)) throw ParseError(peek().offset, "')'");
      return inner;
    }
    throw ParseError(tok.offset, "expression");
  }
};

}  // namespace

ExprPtr parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

ExprPtr parse(const std::string& src) { return parse(tokenize(src)); }

Env Env::with_defaults() {
  Env env;
  env.constants["pi"] = M_PI;
  env.constants["e"] = M_E;
  return env;
}

double eval(const Expr& e, const Env& env) {
  double result;
  switch (e.kind) {
    case Expr::Kind::Constant:
      result = e.number;
      break;
    case Expr::Kind::Variable:
      result = e.name == "u" ? env.u : (e.name == "v" ? env.v : env.z);
      break;
    case Expr::Kind::NamedConst: {
      auto it = env.constants.find(e.name);
      if (it == env.constants.end()) throw UnboundName(e.name);
      result = it->second;
      break;
    }
    case Expr::Kind::Unary:
      result = -eval(*e.left, env);
      break;
    case Expr::Kind::Binary: {
      const double lhs = eval(*e.left, env);
      const double rhs = eval(*e.right, env);
      switch (e.op) {
        case '+': result = lhs + rhs; break;
        case '-': result = lhs - rhs; break;
        case '*': result = lhs * rhs; break;
        case '/':
          if (rhs == 0.0) throw EvalError("division by zero");
          result = lhs / rhs;
          break;
        case '^':
          if (lhs < 0.0 && rhs != std::floor(rhs))
            throw EvalError("non-integer power of a negative base");
          if (lhs == 0.0 && rhs < 0.0) throw EvalError("negative power of zero");
          result = std::pow(lhs, rhs);
          break;
        default: throw EvalError("bad operator");
      }
      break;
    }
    case Expr::Kind::Call: {
      const double arg = eval(*e.left, env);
      if (e.name == "sqrt") {
        if (arg < 0.0) throw EvalError("sqrt of a negative value");
        result = std::sqrt(arg);
      } else if (e.name == "log") {
        if (arg <= 0.0) throw EvalError("log of a non-positive value");
        result = std::log(arg);
      } else {
        result = function_table().at(e.name)(arg);
      }
      break;
    }
    default:
      throw EvalError("bad expression node");
  }
  if (!std::isfinite(result)) throw EvalError("non-finite result");
  return result;
}

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      return e.op == '^' ? 4 : (e.op == '*' || e.op == '/' ? 2 : 1);
    case Expr::Kind::Unary:
      return 3;
    default:
      return 5;  // atoms never need parens
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", e.number);
      out += buf;
      break;
    }
    case Expr::Kind::Variable:
    case Expr::Kind::NamedConst:
      out += e.name;
      break;
    case Expr::Kind::Unary: {
      out += '-';
      const bool parens = precedence(*e.left) < 4 && e.left->kind != Expr::Kind::Unary;
      if (parens) out += '(';
      print(*e.left, out);
      if (parens) out += ')';
      break;
    }
    case Expr::Kind::Binary: {
      const int mine = precedence(e);
      const bool right_assoc = e.op == '^';
      const int lp = precedence(*e.left);
      const int rp = precedence(*e.right);
      const bool lparens = right_assoc ? lp <= mine : lp < mine;
      const bool rparens = right_assoc ? rp < mine : rp <= mine;
      if (lparens) out += '(';
      print(*e.left, out);
      if (lparens) out += ')';
      out += e.op;
      if (rparens) out += '(';
      print(*e.right, out);
      if (rparens) out += ')';
      break;
    }
    case Expr::Kind::Call:
      out += e.name;
      out += '(';
      print(*e.left, out);
      out += ')';
      break;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Constant:
      return a.number == b.number;
    case Expr::Kind::Variable:
    case Expr::Kind::NamedConst:
      return a.name == b.name;
    case Expr::Kind::Unary:
      return structurally_equal(*a.left, *b.left);
    case Expr::Kind::Binary:
      return a.op == b.op && structurally_equal(*a.left, *b.left) &&
             structurally_equal(*a.right, *b.right);
    case Expr::Kind::Call:
      return a.name == b.name && structurally_equal(*a.left, *b.left);
  }
  return false;
}

}  // namespace minsurf
