#include "pmt/testbed/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace pmt {

struct Expression::Node {
  enum class Op { constant, coord, radius, add, sub, mul, div, pow, neg, call };
  Op op = Op::constant;
  double value = 0.0;
  int index = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(const Vec& x) const {
    switch (op) {
      case Op::constant: return value;
      case Op::coord: return x(index);
      case Op::radius: return x.norm();
      case Op::add: return a->eval(x) + b->eval(x);
      case Op::sub: return a->eval(x) - b->eval(x);
      case Op::mul: return a->eval(x) * b->eval(x);
      case Op::div: return a->eval(x) / b->eval(x);
      case Op::pow: return std::pow(a->eval(x), b->eval(x));
      case Op::neg: return -a->eval(x);
      case Op::call: return fn(a->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

double f_sqrt(double v) { return std::sqrt(v); }
double f_exp(double v) { return std::exp(v); }
double f_log(double v) { return std::log(v); }
double f_sin(double v) { return std::sin(v); }
double f_cos(double v) { return std::cos(v); }
double f_abs(double v) { return std::abs(v); }

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto p = std::make_shared<Expression::Node>();
  p->op = op;
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}

NodePtr constant(double v) {
  auto p = std::make_shared<Expression::Node>();
  p->value = v;
  return p;
}

class Parser {
 public:
  Parser(const std::string& s, int n, const std::map<std::string, double>& params)
      : s_(s), n_(n), params_(params) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression: " + what + " at position " + std::to_string(pos_) + " in '" +
                      s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (accept('+')) e = make(Op::add, e, term());
      else if (accept('-')) e = make(Op::sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (accept('*')) e = make(Op::mul, e, unary());
      else if (accept('/')) e = make(Op::div, e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      return name_or_call(name);
    }
    fail("unexpected character");
  }

  NodePtr name_or_call(const std::string& name) {
    static const std::map<std::string, double (*)(double)> funcs = {
        {"sqrt", f_sqrt}, {"exp", f_exp}, {"log", f_log},
        {"sin", f_sin},   {"cos", f_cos}, {"abs", f_abs}};
    auto f = funcs.find(name);
    if (f != funcs.end()) {
      if (!accept('(')) fail("expected '(' after " + name);
      auto p = std::make_shared<Expression::Node>();
      p->op = Op::call;
      p->fn = f->second;
      p->a = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (name == "r") return make(Op::radius);
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      int k = std::atoi(name.c_str() + 1);
      if (k < 1 || k > n_) fail("coordinate " + name + " out of range");
      auto p = std::make_shared<Expression::Node>();
      p->op = Op::coord;
      p->index = k - 1;
      return p;
    }
    auto p = params_.find(name);
    if (p != params_.end()) return constant(p->second);
    fail("unknown name '" + name + "'");
  }

  const std::string& s_;
  int n_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, int n,
                             const std::map<std::string, double>& params) {
  if (n < 3 || n > kMaxDim) throw ConfigError("expression: dimension out of range");
  Expression e;
  e.root_ = Parser(text, n, params).parse();
  e.n_ = n;
  e.text_ = text;
  return e;
}

double Expression::operator()(const Vec& x) const { return root_->eval(x); }

}  // namespace pmt
