#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fpl::expr {

/// Grammar, with '^' right-associative and unary minus binding tighter
/// than '^' (so -x^2 reads as (-x)^2):
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := unary ('^' factor)?
///   unary  := '-'? atom
///   atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
/// Functions: cos, sin, exp, abs, sqrt.
struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class NodeKind { number, variable, add, sub, mul, div, pow, neg, call };

struct Node {
    NodeKind kind;
    double number = 0.0;       // number
    std::string func;          // call
    NodePtr lhs, rhs;          // binary: lhs/rhs; neg and call: lhs only
};

struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(const std::string& what, size_t offset)
        : std::runtime_error(what), offset(offset) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

NodePtr parse(std::string_view src);

/// Throws EvalError when the result (or any intermediate) is non-finite.
double eval(const Node& node, double x);

/// Prints with the minimal parentheses the grammar needs; parsing the
/// output reproduces the tree.
std::string to_string(const Node& node);

bool equal(const Node& a, const Node& b);

}  // namespace fpl::expr
