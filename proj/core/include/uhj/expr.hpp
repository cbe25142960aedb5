#pragma once

// Arithmetic expressions for configuration files.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | tan | exp | log | sqrt | abs
//
// '^' binds tighter than unary minus and associates to the right, so
// -2^2 = -4 and 2^3^2 = 512. Names must be declared up front; variables
// are addressed by their position in the declared list.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uhj/errors.hpp"
#include "uhj/geometry.hpp"
#include "uhj/linalg.hpp"

namespace uhj::expr {

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t position);
  /// 0-based offset into the source text.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Domain fault during evaluation (log of a non-positive number, division by
/// zero, ...). The message names the offending subexpression.
class EvalError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class Op {
  kNumber,
  kVariable,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kSin,
  kCos,
  kTan,
  kExp,
  kLog,
  kSqrt,
  kAbs,
};

struct Node {
  Op op = Op::kNumber;
  double value = 0.0;      ///< kNumber
  std::size_t index = 0;   ///< kVariable: position in the declared list
  std::shared_ptr<const Node> lhs;  ///< operand of unary ops and functions
  std::shared_ptr<const Node> rhs;
};

bool same_tree(const Node& a, const Node& b);

class Expr {
 public:
  static Expr parse(std::string_view text, std::vector<std::string> declared);

  const std::vector<std::string>& declared() const noexcept {
    return declared_;
  }
  const Node& root() const noexcept { return *root_; }

  /// `values` holds one entry per declared name, in declared order.
  double eval(std::span<const double> values) const;
  double eval(const Vector& values) const {
    return eval(std::span<const double>(values.data(),
                                        static_cast<std::size_t>(values.size())));
  }
  /// Throws InputError when a name that occurs in the tree is missing.
  double eval(const std::map<std::string, double>& env) const;

  /// Fully parenthesized form; parsing it again gives an identical tree.
  std::string to_string() const;

  /// Declared names that actually occur, in declared order.
  std::vector<std::string> free_variables() const;

  /// Same declared list and identical trees.
  bool operator==(const Expr& other) const;

 private:
  Expr(std::vector<std::string> declared, std::shared_ptr<const Node> root);

  std::vector<std::string> declared_;
  std::shared_ptr<const Node> root_;
};

/// Central differences of e in the named variables, with the same step rule
/// as fd_gradient. A fault inside the stencil raises EvalError naming the
/// variable.
Vector grad_fd(const Expr& e, const std::map<std::string, double>& env,
               const std::vector<std::string>& vars);

/// z -> e([z ; tail]): the first declared names are coordinates, the rest
/// are parameters fixed to `tail`.
std::function<double(const Vector&)> bind(Expr e, Vector tail = {});

ScalarField scalar_field(Expr e, Vector tail = {});

}  // namespace uhj::expr
