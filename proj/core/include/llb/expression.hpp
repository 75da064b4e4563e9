#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>

#include "llb/field.hpp"

namespace llb {

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& source, std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Scalar expression in x, y, z with + - * / ^, parentheses, unary minus, the constant pi and
/// the functions sin, cos, tan, exp, log, sqrt, abs. `^` is right-associative and binds tighter
/// than unary minus, so -x^2 = -(x^2).
class Expression {
 public:
  /// Throws ExpressionError with the offending position.
  static Expression parse(const std::string& source);

  double operator()(const Vec3& x) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

/// Vector field from three component expressions.
VectorFunction parse_vector_field(const std::array<std::string, 3>& components);

}  // namespace llb
