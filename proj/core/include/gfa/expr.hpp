#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfa/numeric.hpp"

namespace gfa {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Builtin { Exp, Sin, Cos, Log, Sqrt, Bump, Gauss, BumpDeriv };

/// Immutable AST node. Variables: index -1 is `eps`, index i >= 0 is x_{i+1}.
/// Pow exponents are rational constants (general exponents are rewritten to
/// exp(e * log(base)) at parse time). Differentiation shares subtrees, so
/// expressions form DAGs; evaluation memoizes per node.
struct Expr {
    enum class Kind { Number, Var, Add, Sub, Mul, Div, Pow, Call };

    Kind kind;
    double number = 0.0;  // Number
    int var = 0;          // Var
    ExprPtr lhs, rhs;     // binary nodes; Pow uses lhs + expo
    double expo = 0.0;
    Builtin fn = Builtin::Exp;  // Call
    int fn_order = 0;           // BumpDeriv order
    ExprPtr arg;                // Call argument (all builtins are unary)
    int line = 0, col = 0;      // source location when parsed, else 0
};

// Smart constructors; constant folding and the 0/1 identities happen here.
ExprPtr num(double v);
ExprPtr var(int index);  // -1 = eps
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr base, double expo);
ExprPtr call(Builtin fn, ExprPtr arg, int bump_order = 0);

/// True if no Var node occurs below e.
bool is_constant(const Expr& e);
/// Largest x-variable index used, -1 if none; `uses_eps` reports eps usage.
int max_var_index(const Expr& e);
bool uses_eps(const Expr& e);

/// Symbolic partial derivative with respect to variable `v` (-1 for eps).
ExprPtr differentiate(const ExprPtr& e, int v);

/// Canonical text form; parse(print(e)) is structurally equal to e.
std::string print(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

/// Memoizing evaluator over the expression DAG. One context per evaluation
/// point; contexts are cheap and not shared across threads.
class EvalContext {
public:
    EvalContext(double eps, std::span<const double> x) : eps_(eps), x_(x) {}

    LogComplex eval(const ExprPtr& e);

private:
    double eps_;
    std::span<const double> x_;
    std::unordered_map<const Expr*, LogComplex> cache_;
};

/// Convenience wrapper: evaluate at (eps, x).
LogComplex eval(const ExprPtr& e, double eps, std::span<const double> x);

}  // namespace gfa
