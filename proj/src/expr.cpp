#include "famclass/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "famclass/error.hpp"

namespace famclass::expr {

enum class Op { Num, X, B, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

struct Node {
  Op op = Op::Num;
  double value = 0.0;
  int index = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse_all() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

  int fiber_arity = 0;
  int base_arity = 0;

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::InvalidInput, "expression \"" + s_ + "\" at " + std::to_string(pos_) + ": " + what);
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
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(Op::Add, n, term());
      else if (accept('-')) n = make(Op::Sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Op::Mul, n, unary());
      else if (accept('/')) n = make(Op::Div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    NodePtr base = primary();
    if (accept('^')) return make(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) error("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        error("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) error("unexpected '" + std::string(1, c) + "'");
    std::string word;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) word += s_[pos_++];
    if (word == "pi") {
      auto n = std::make_shared<Node>();
      n->value = std::numbers::pi;
      return n;
    }
    if (word == "sin" || word == "cos" || word == "exp") {
      if (!accept('(')) error("expected '(' after " + word);
      NodePtr arg = expr();
      if (!accept(')')) error("expected ')'");
      return make(word == "sin" ? Op::Sin : word == "cos" ? Op::Cos : Op::Exp, arg);
    }
    if ((word[0] == 'x' || word[0] == 'b') && word.size() > 1 &&
        word.find_first_not_of("0123456789", 1) == std::string::npos) {
      auto n = std::make_shared<Node>();
      n->op = word[0] == 'x' ? Op::X : Op::B;
      n->index = std::stoi(word.substr(1));
      int& arity = word[0] == 'x' ? fiber_arity : base_arity;
      arity = std::max(arity, n->index + 1);
      return n;
    }
    error("unknown identifier " + word);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, const std::vector<double>& x, const std::vector<double>& b) {
  switch (n.op) {
    case Op::Num: return n.value;
    case Op::X: return x.at(static_cast<std::size_t>(n.index));
    case Op::B: return b.at(static_cast<std::size_t>(n.index));
    case Op::Neg: return -eval_node(*n.lhs, x, b);
    case Op::Add: return eval_node(*n.lhs, x, b) + eval_node(*n.rhs, x, b);
    case Op::Sub: return eval_node(*n.lhs, x, b) - eval_node(*n.rhs, x, b);
    case Op::Mul: return eval_node(*n.lhs, x, b) * eval_node(*n.rhs, x, b);
    case Op::Div: return eval_node(*n.lhs, x, b) / eval_node(*n.rhs, x, b);
    case Op::Pow: return std::pow(eval_node(*n.lhs, x, b), eval_node(*n.rhs, x, b));
    case Op::Sin: return std::sin(eval_node(*n.lhs, x, b));
    case Op::Cos: return std::cos(eval_node(*n.lhs, x, b));
    case Op::Exp: return std::exp(eval_node(*n.lhs, x, b));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& source) {
  Parser p(source);
  Expression e;
  e.source_ = source;
  e.root_ = p.parse_all();
  e.fiber_arity_ = p.fiber_arity;
  e.base_arity_ = p.base_arity;
  return e;
}

double Expression::eval(const std::vector<double>& x, const std::vector<double>& b) const {
  require(static_cast<int>(x.size()) >= fiber_arity_ && static_cast<int>(b.size()) >= base_arity_,
          ErrorKind::InvalidInput, "expression \"" + source_ + "\" references missing coordinates");
  return eval_node(*root_, x, b);
}

}  // namespace famclass::expr
