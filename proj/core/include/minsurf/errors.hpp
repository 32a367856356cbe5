#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minsurf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geom-kernel
struct DegenerateFrame : Error {
  using Error::Error;
};
struct DomainEscape : Error {
  using Error::Error;
};
struct NotPositiveDefinite : Error {
  using Error::Error;
};

// expr-lang
struct LexError : Error {
  std::size_t offset;
  LexError(std::size_t off, const std::string& msg)
      : Error("lex error at offset " + std::to_string(off) + ": " + msg), offset(off) {}
};
struct ParseError : Error {
  std::size_t offset;
  std::string expected;
  ParseError(std::size_t off, const std::string& what_expected)
      : Error("parse error at offset " + std::to_string(off) + ": expected " + what_expected),
        offset(off),
        expected(what_expected) {}
};
struct UnknownFunction : Error {
  std::size_t offset;
  UnknownFunction(std::size_t off, const std::string& name)
      : Error("unknown function '" + name + "' at offset " + std::to_string(off)), offset(off) {}
};
struct UnboundName : Error {
  std::string name;
  explicit UnboundName(const std::string& n) : Error("unbound name '" + n + "'"), name(n) {}
};
struct EvalError : Error {
  using Error::Error;
};

// families
struct BadBasis : Error {
  using Error::Error;
};
struct NotOnSphere : Error {
  using Error::Error;
};
struct PoleSingularity : Error {
  using Error::Error;
};

// ode-phase
struct EmptyInterval : Error {
  using Error::Error;
};
struct OutOfInterval : Error {
  using Error::Error;
};
struct QuadratureFailure : Error {
  using Error::Error;
};

// shape-analysis
struct DegeneratePencil : Error {
  using Error::Error;
};
struct FrameAlignmentFailure : Error {
  using Error::Error;
};

// cli
struct ConfigError : Error {
  std::size_t line;
  ConfigError(std::size_t ln, const std::string& msg)
      : Error("config error at line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

}  // namespace minsurf
