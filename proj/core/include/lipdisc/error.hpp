#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lipdisc {

// Base for every error the library throws. Callers that only need to
// distinguish "bad input" from "numerics went wrong" can use category().
class Error : public std::runtime_error {
 public:
  enum class Category { kInput, kNumerical };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

// Syntax error in an expression string.
class ParseError : public Error {
 public:
  enum class Kind { kSyntax, kUnknownFunction, kUnknownVariable, kBadExponent };

  ParseError(Kind kind, std::size_t offset, std::string expected,
             const std::string& message)
      : Error(Category::kInput, message),
        kind_(kind),
        offset_(offset),
        expected_(std::move(expected)) {}

  Kind kind() const noexcept { return kind_; }
  // Byte offset into the source text where the problem was detected.
  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  Kind kind_;
  std::size_t offset_;
  std::string expected_;
};

// Invalid system description. path() is a JSON-pointer-like location such
// as "$.A[1][0]" or "$.f[2]".
class SpecError : public Error {
 public:
  SpecError(std::string path, const std::string& message)
      : Error(Category::kInput, path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Bad argument to a library call (unsupported order, missing constant, ...).
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what)
      : Error(Category::kInput, what) {}
};

// Domain error while evaluating an expression (ln of non-positive, sqrt of
// negative, division by zero, out-of-range variable).
class EvalError : public Error {
 public:
  EvalError(std::string node, const std::string& message)
      : Error(Category::kNumerical, message + " in '" + node + "'"),
        node_(std::move(node)) {}

  // Unparsed text of the offending sub-expression.
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

// Iteration cap hit, integrator step underflow, too many failed samples.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(Category::kNumerical, what) {}
};

}  // namespace lipdisc
