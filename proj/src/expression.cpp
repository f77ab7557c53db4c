#include "qmpkit/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>

#include "qmpkit/errors.hpp"

namespace qmpkit {

struct Expression::Node {
  enum class Kind { Number, Variable, Unary, Binary, Call } kind;
  double number = 0.0;
  int variable = 0;  // 1-based coordinate index
  char op = 0;
  std::string func;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

struct Parser {
  const std::string& text;
  size_t pos = 0;
  int max_var = 0;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos) + " in '" + text + "'");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    return n;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos;
      NodePtr rhs = parse_term();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->op = c;
      n->args = {lhs, rhs};
      lhs = n;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_power();
    while (true) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos;
      NodePtr rhs = parse_power();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->op = c;
      n->args = {lhs, rhs};
      lhs = n;
    }
  }

  NodePtr parse_power() {
    NodePtr base = parse_unary();
    if (peek() == '^') {
      ++pos;
      NodePtr exp = parse_power();  // right associative
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->op = '^';
      n->args = {base, exp};
      return n;
    }
    return base;
  }

  NodePtr parse_unary() {
    if (peek() == '-') {
      ++pos;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = '-';
      n->args = {parse_unary()};
      return n;
    }
    if (peek() == '+') {
      ++pos;
      return parse_unary();
    }
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos >= text.size()) error("unexpected end of expression");
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) error("missing ')'");
      return inner;
    }
    error(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    size_t end = pos;
    char* after = nullptr;
    double v = std::strtod(text.c_str() + pos, &after);
    end = after - text.c_str();
    if (end == pos) error("invalid number");
    pos = end;
    return make_number(v);
  }

  NodePtr parse_ident() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name = text.substr(start, pos - start);

    if (name == "pi") return make_number(M_PI);
    if (name == "e") return make_number(M_E);

    if (name.size() >= 2 && name[0] == 'q') {
      bool digits = true;
      for (size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits) {
        int idx = std::stoi(name.substr(1));
        if (idx < 1) error("coordinate index must start at 1");
        max_var = std::max(max_var, idx);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Variable;
        n->variable = idx;
        return n;
      }
    }

    if (!eat('(')) error("unknown identifier '" + name + "'");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->func = name;
    n->args.push_back(parse_expr());
    while (eat(',')) n->args.push_back(parse_expr());
    if (!eat(')')) error("missing ')' after arguments of '" + name + "'");

    static const std::map<std::string, size_t> arity = {
        {"sin", 1}, {"cos", 1}, {"tan", 1}, {"exp", 1}, {"log", 1}, {"sqrt", 1}, {"pow", 2}};
    auto it = arity.find(name);
    if (it == arity.end()) error("unknown function '" + name + "'");
    if (n->args.size() != it->second)
      error("'" + name + "' expects " + std::to_string(it->second) + " argument(s)");
    return n;
  }
};

double eval_node(const Node& n, const Eigen::VectorXd& q) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.number;
    case Node::Kind::Variable:
      if (n.variable > q.size())
        fail(ErrorCode::InvalidArgument,
             "expression references q" + std::to_string(n.variable) + " beyond chart dimension");
      return q(n.variable - 1);
    case Node::Kind::Unary:
      return -eval_node(*n.args[0], q);
    case Node::Kind::Binary: {
      double a = eval_node(*n.args[0], q);
      double b = eval_node(*n.args[1], q);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      break;
    }
    case Node::Kind::Call: {
      double a = eval_node(*n.args[0], q);
      if (n.func == "sin") return std::sin(a);
      if (n.func == "cos") return std::cos(a);
      if (n.func == "tan") return std::tan(a);
      if (n.func == "exp") return std::exp(a);
      if (n.func == "log") return std::log(a);
      if (n.func == "sqrt") return std::sqrt(a);
      if (n.func == "pow") return std::pow(a, eval_node(*n.args[1], q));
      break;
    }
  }
  fail(ErrorCode::ParseError, "malformed expression node");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  NodePtr root = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.error("trailing input");
  Expression e;
  e.root_ = root;
  e.max_var_ = p.max_var;
  e.text_ = text;
  return e;
}

double Expression::eval(const Eigen::VectorXd& q) const {
  if (!root_) fail(ErrorCode::InvalidArgument, "empty expression");
  return eval_node(*root_, q);
}

}  // namespace qmpkit
