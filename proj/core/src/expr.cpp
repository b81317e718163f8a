#include "gfa/expr.hpp"

#include <charconv>
#include <cmath>

#include "gfa/bump.hpp"

namespace gfa {

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

bool is_number(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::Number && e->number == v;
}

std::string location_suffix(const Expr& e) {
    if (e.line == 0) return "";
    return " at line " + std::to_string(e.line) + " col " + std::to_string(e.col);
}

const char* builtin_name(Builtin f) {
    switch (f) {
        case Builtin::Exp: return "exp";
        case Builtin::Sin: return "sin";
        case Builtin::Cos: return "cos";
        case Builtin::Log: return "log";
        case Builtin::Sqrt: return "sqrt";
        case Builtin::Bump: return "bump";
        case Builtin::Gauss: return "gauss";
        case Builtin::BumpDeriv: return "bumpd";
    }
    return "?";
}

}  // namespace

ExprPtr num(double v) {
    if (!std::isfinite(v)) throw Error(Error::Kind::InvalidInput, "non-finite constant");
    Expr e;
    e.kind = Expr::Kind::Number;
    e.number = v;
    return make(std::move(e));
}

ExprPtr var(int index) {
    if (index < -1) throw Error(Error::Kind::InvalidInput, "bad variable index");
    Expr e;
    e.kind = Expr::Kind::Var;
    e.var = index;
    return make(std::move(e));
}

ExprPtr add(ExprPtr a, ExprPtr b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number) {
        return num(a->number + b->number);
    }
    Expr e;
    e.kind = Expr::Kind::Add;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (is_number(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number) {
        return num(a->number - b->number);
    }
    Expr e;
    e.kind = Expr::Kind::Sub;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return num(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number) {
        return num(a->number * b->number);
    }
    Expr e;
    e.kind = Expr::Kind::Mul;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

ExprPtr div(ExprPtr a, ExprPtr b) {
    if (is_number(b, 1.0)) return a;
    if (is_number(a, 0.0) && !is_number(b, 0.0)) return num(0.0);
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number && b->number != 0.0) {
        return num(a->number / b->number);
    }
    Expr e;
    e.kind = Expr::Kind::Div;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

ExprPtr pow(ExprPtr base, double expo) {
    if (!std::isfinite(expo)) throw Error(Error::Kind::InvalidInput, "non-finite exponent");
    if (expo == 1.0) return base;
    if (expo == 0.0) return num(1.0);
    if (base->kind == Expr::Kind::Number) {
        double v = std::pow(base->number, expo);
        if (std::isfinite(v)) return num(v);
    }
    Expr e;
    e.kind = Expr::Kind::Pow;
    e.lhs = std::move(base);
    e.expo = expo;
    return make(std::move(e));
}

ExprPtr call(Builtin fn, ExprPtr arg, int bump_order) {
    if (fn == Builtin::BumpDeriv &&
        (bump_order < 1 || bump_order > BumpKernel::kMaxOrder)) {
        throw Error(Error::Kind::InvalidInput, "bump derivative order out of range");
    }
    if (arg->kind == Expr::Kind::Number && fn != Builtin::BumpDeriv) {
        // Fold constant calls where the value is a plain finite real.
        double t = arg->number;
        double v = 0.0;
        bool ok = true;
        switch (fn) {
            case Builtin::Exp: v = std::exp(t); break;
            case Builtin::Sin: v = std::sin(t); break;
            case Builtin::Cos: v = std::cos(t); break;
            case Builtin::Log:
                if (t > 0) v = std::log(t);
                else ok = false;
                break;
            case Builtin::Sqrt:
                if (t >= 0) v = std::sqrt(t);
                else ok = false;
                break;
            case Builtin::Bump:
                v = BumpKernel::instance().deriv_log(0, t).real();
                break;
            case Builtin::Gauss: v = std::exp(-t * t); break;
            default: ok = false;
        }
        if (ok && std::isfinite(v)) return num(v);
    }
    Expr e;
    e.kind = Expr::Kind::Call;
    e.fn = fn;
    e.fn_order = bump_order;
    e.arg = std::move(arg);
    return make(std::move(e));
}

bool is_constant(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number: return true;
        case Expr::Kind::Var: return false;
        case Expr::Kind::Pow: return is_constant(*e.lhs);
        case Expr::Kind::Call: return is_constant(*e.arg);
        default: return is_constant(*e.lhs) && is_constant(*e.rhs);
    }
}

int max_var_index(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number: return -1;
        case Expr::Kind::Var: return e.var;
        case Expr::Kind::Pow: return max_var_index(*e.lhs);
        case Expr::Kind::Call: return max_var_index(*e.arg);
        default: return std::max(max_var_index(*e.lhs), max_var_index(*e.rhs));
    }
}

bool uses_eps(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number: return false;
        case Expr::Kind::Var: return e.var == -1;
        case Expr::Kind::Pow: return uses_eps(*e.lhs);
        case Expr::Kind::Call: return uses_eps(*e.arg);
        default: return uses_eps(*e.lhs) || uses_eps(*e.rhs);
    }
}

ExprPtr differentiate(const ExprPtr& e, int v) {
    switch (e->kind) {
        case Expr::Kind::Number: return num(0.0);
        case Expr::Kind::Var: return num(e->var == v ? 1.0 : 0.0);
        case Expr::Kind::Add: return add(differentiate(e->lhs, v), differentiate(e->rhs, v));
        case Expr::Kind::Sub: return sub(differentiate(e->lhs, v), differentiate(e->rhs, v));
        case Expr::Kind::Mul:
            return add(mul(differentiate(e->lhs, v), e->rhs),
                       mul(e->lhs, differentiate(e->rhs, v)));
        case Expr::Kind::Div:
            return div(sub(mul(differentiate(e->lhs, v), e->rhs),
                           mul(e->lhs, differentiate(e->rhs, v))),
                       pow(e->rhs, 2.0));
        case Expr::Kind::Pow:
            return mul(mul(num(e->expo), pow(e->lhs, e->expo - 1.0)),
                       differentiate(e->lhs, v));
        case Expr::Kind::Call: {
            ExprPtr inner = differentiate(e->arg, v);
            if (is_number(inner, 0.0)) return num(0.0);
            ExprPtr outer;
            switch (e->fn) {
                case Builtin::Exp: outer = e; break;  // shares the node
                case Builtin::Sin: outer = call(Builtin::Cos, e->arg); break;
                case Builtin::Cos: outer = mul(num(-1.0), call(Builtin::Sin, e->arg)); break;
                case Builtin::Log: return div(inner, e->arg);
                case Builtin::Sqrt: return div(inner, mul(num(2.0), e));
                case Builtin::Gauss:
                    outer = mul(mul(num(-2.0), e->arg), e);
                    break;
                case Builtin::Bump:
                    outer = call(Builtin::BumpDeriv, e->arg, 1);
                    break;
                case Builtin::BumpDeriv:
                    outer = call(Builtin::BumpDeriv, e->arg, e->fn_order + 1);
                    break;
            }
            return mul(outer, inner);
        }
    }
    throw Error(Error::Kind::InvalidInput, "corrupt expression");
}

// ---------------------------------------------------------------------------
// Printing with minimal parentheses.

namespace {

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Pow: return 3;
        default: return 4;
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

void print_rec(const Expr& e, int parent_prec, bool rhs_of_noncommutative,
               std::string& out) {
    int prec = precedence(e);
    bool need_parens =
        prec < parent_prec || (prec == parent_prec && rhs_of_noncommutative) ||
        (e.kind == Expr::Kind::Number && e.number < 0 && parent_prec > 0);
    if (need_parens) out += '(';
    switch (e.kind) {
        case Expr::Kind::Number: out += format_double(e.number); break;
        case Expr::Kind::Var:
            out += e.var == -1 ? "eps" : ("x" + std::to_string(e.var + 1));
            break;
        case Expr::Kind::Add:
            print_rec(*e.lhs, 1, false, out);
            out += " + ";
            print_rec(*e.rhs, 1, false, out);
            break;
        case Expr::Kind::Sub:
            print_rec(*e.lhs, 1, false, out);
            out += " - ";
            print_rec(*e.rhs, 1, true, out);
            break;
        case Expr::Kind::Mul:
            print_rec(*e.lhs, 2, false, out);
            out += " * ";
            print_rec(*e.rhs, 2, false, out);
            break;
        case Expr::Kind::Div:
            print_rec(*e.lhs, 2, false, out);
            out += " / ";
            print_rec(*e.rhs, 2, true, out);
            break;
        case Expr::Kind::Pow:
            print_rec(*e.lhs, 4, false, out);
            out += '^';
            if (e.expo < 0 || e.expo != std::rint(e.expo)) {
                out += '(';
                out += format_double(e.expo);
                out += ')';
            } else {
                out += format_double(e.expo);
            }
            break;
        case Expr::Kind::Call:
            out += builtin_name(e.fn);
            if (e.fn == Builtin::BumpDeriv) out += std::to_string(e.fn_order);
            out += '(';
            print_rec(*e.arg, 0, false, out);
            out += ')';
            break;
    }
    if (need_parens) out += ')';
}

}  // namespace

std::string print(const ExprPtr& e) {
    std::string out;
    print_rec(*e, 0, false, out);
    return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Number: return a->number == b->number;
        case Expr::Kind::Var: return a->var == b->var;
        case Expr::Kind::Pow:
            return a->expo == b->expo && structurally_equal(a->lhs, b->lhs);
        case Expr::Kind::Call:
            return a->fn == b->fn && a->fn_order == b->fn_order &&
                   structurally_equal(a->arg, b->arg);
        default:
            return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

// ---------------------------------------------------------------------------
// Evaluation.

LogComplex EvalContext::eval(const ExprPtr& e) {
    auto it = cache_.find(e.get());
    if (it != cache_.end()) return it->second;
    LogComplex out;
    switch (e->kind) {
        case Expr::Kind::Number: out = LogComplex::from_real(e->number); break;
        case Expr::Kind::Var:
            if (e->var == -1) {
                out = LogComplex::from_real(eps_);
            } else {
                if (e->var >= static_cast<int>(x_.size())) {
                    throw Error(Error::Kind::Domain,
                                "variable x" + std::to_string(e->var + 1) +
                                    " beyond point dimension" + location_suffix(*e));
                }
                out = LogComplex::from_real(x_[e->var]);
            }
            break;
        case Expr::Kind::Add: out = eval(e->lhs) + eval(e->rhs); break;
        case Expr::Kind::Sub: out = eval(e->lhs) - eval(e->rhs); break;
        case Expr::Kind::Mul: out = eval(e->lhs) * eval(e->rhs); break;
        case Expr::Kind::Div: {
            LogComplex d = eval(e->rhs);
            if (d.is_zero()) {
                throw Error(Error::Kind::Domain, "division by zero" + location_suffix(*e));
            }
            out = eval(e->lhs) / d;
            break;
        }
        case Expr::Kind::Pow: {
            LogComplex b = eval(e->lhs);
            try {
                out = gfa::pow(b, e->expo);
            } catch (const Error& err) {
                throw Error(err.kind(), std::string(err.what()) + location_suffix(*e));
            }
            break;
        }
        case Expr::Kind::Call: {
            LogComplex a = eval(e->arg);
            switch (e->fn) {
                case Builtin::Exp: out = gfa::exp(a); break;
                case Builtin::Sin: out = LogComplex::from_complex(std::sin(a.to_complex())); break;
                case Builtin::Cos: out = LogComplex::from_complex(std::cos(a.to_complex())); break;
                case Builtin::Log:
                    if (a.is_zero() || a.dir.imag() != 0.0 || a.dir.real() <= 0.0) {
                        throw Error(Error::Kind::Domain,
                                    "log of non-positive value" + location_suffix(*e));
                    }
                    out = LogComplex::from_real(a.log_mag);
                    break;
                case Builtin::Sqrt:
                    if (!a.is_zero() && (a.dir.imag() != 0.0 || a.dir.real() < 0.0)) {
                        throw Error(Error::Kind::Domain,
                                    "sqrt of negative value" + location_suffix(*e));
                    }
                    out = gfa::pow(a, 0.5);
                    break;
                case Builtin::Bump:
                    out = BumpKernel::instance().deriv_log(0, a.real());
                    break;
                case Builtin::Gauss: {
                    double t = a.real();
                    out = LogComplex::from_log_real(-t * t);
                    break;
                }
                case Builtin::BumpDeriv:
                    out = BumpKernel::instance().deriv_log(e->fn_order, a.real());
                    break;
            }
            break;
        }
    }
    cache_.emplace(e.get(), out);
    return out;
}

LogComplex eval(const ExprPtr& e, double eps, std::span<const double> x) {
    EvalContext ctx(eps, x);
    return ctx.eval(e);
}

}  // namespace gfa
