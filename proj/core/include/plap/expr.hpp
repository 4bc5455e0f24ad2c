#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plap/jet.hpp"

namespace plap::jets {

enum class Op { Number, Variable, Neg, Plus, Minus, Times, Divide, Pow, Sin, Cos, Exp, Log, Sqrt };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Number;
    double number = 0.0;
    // 0-based variable index for Op::Variable (x1 -> 0).
    int variable = 0;
    Expr lhs;
    Expr rhs;
};

// Grammar, ASCII, whitespace between tokens ignored:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' factor)?
//   atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')' | '-' atom
// with IDENT one of x1 x2 x3 sin cos exp log sqrt. A leading minus binds
// looser than '^', so -x1^2 is -(x1^2). Throws ParseError with the byte
// offset of the offending token and the set of tokens accepted there.
Expr parse_expr(std::string_view text);

// Canonical form, e.g. Plus(1, Times(0.1, x1)).
std::string to_string(const Expr& e);

// Highest variable index used plus one (0 for a constant expression).
int variable_count(const Expr& e);

// Evaluate with variable k bound to vars[k].
Jet eval(const Expr& e, std::span<const Jet> vars);

// Variable k bound to point[k] + increment along k, truncated at `order`.
Jet eval_jet(const Expr& e, std::span<const double> point, int order);

// Constant term of eval_jet, computed through the same operations.
double eval_point(const Expr& e, std::span<const double> point);

}  // namespace plap::jets
