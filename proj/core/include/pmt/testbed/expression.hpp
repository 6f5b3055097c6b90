#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pmt/types.hpp"

namespace pmt {

// Closed-form expressions over x1..xn, r = |x| and named parameters.
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | func '(' expr ')' | '(' expr ')'
// func is one of sqrt, exp, log, sin, cos, abs. Parameters are bound at parse time.
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text, int n,
                          const std::map<std::string, double>& params = {});

  double operator()(const Vec& x) const;
  int dim() const { return n_; }
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  int n_ = 3;
  std::string text_;
};

}  // namespace pmt
