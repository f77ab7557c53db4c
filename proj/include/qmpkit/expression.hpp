#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmpkit {

// A parsed arithmetic expression in the coordinate variables q1..qn.
// Supported grammar: numbers, + - * / ^ (right-assoc), unary minus,
// parentheses, sin cos tan sqrt exp log pow(a,b), constants pi and e.
class Expression {
public:
  static Expression parse(const std::string& text);

  double eval(const Eigen::VectorXd& q) const;

  // Highest coordinate index referenced (q3 -> 3); 0 for constants.
  int max_variable() const { return max_var_; }

  const std::string& text() const { return text_; }

  struct Node;

private:
  std::shared_ptr<const Node> root_;
  int max_var_ = 0;
  std::string text_;
};

}  // namespace qmpkit
