#pragma once

// Tiny arithmetic expression language for user-supplied section components.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | x<i> | b<i> | pi | fn '(' expr ')' | '(' expr ')'
//   fn      := sin | cos | exp
//
// x<i> is the i-th fiber coordinate, b<i> the i-th base coordinate.

#include <memory>
#include <string>
#include <vector>

namespace famclass::expr {

struct Node;

class Expression {
 public:
  /// Parses `source`; throws InvalidInput with the offending position.
  static Expression parse(const std::string& source);

  double eval(const std::vector<double>& x, const std::vector<double>& b) const;

  const std::string& source() const { return source_; }
  /// One past the largest x / b index referenced (0 if none).
  int fiber_arity() const { return fiber_arity_; }
  int base_arity() const { return base_arity_; }

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
  int fiber_arity_ = 0;
  int base_arity_ = 0;
};

}  // namespace famclass::expr
