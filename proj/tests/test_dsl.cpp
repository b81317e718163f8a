#include <doctest.h>

#include <cmath>
#include <random>

#include "grammar_corpus.hpp"
#include "gfa/bump.hpp"
#include "gfa/family.hpp"
#include "gfa/parser.hpp"

using namespace gfa;

namespace {

double eval1(const ExprPtr& e, double eps, double x) {
    double xs[1] = {x};
    return eval(e, eps, std::span<const double>(xs, 1)).real();
}

/// 5-point central finite difference in one variable.
double fd5(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Test-side canonicalizer for structural comparisons: flattens and sorts
/// commutative chains by printed form. The library itself does not reorder.
ExprPtr canon(const ExprPtr& e);

void collect(const ExprPtr& e, Expr::Kind k, std::vector<ExprPtr>& out) {
    if (e->kind == k) {
        collect(e->lhs, k, out);
        collect(e->rhs, k, out);
    } else {
        out.push_back(canon(e));
    }
}

ExprPtr canon(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Mul: {
            std::vector<ExprPtr> parts;
            collect(e, e->kind, parts);
            std::sort(parts.begin(), parts.end(),
                      [](const ExprPtr& a, const ExprPtr& b) { return print(a) < print(b); });
            ExprPtr acc = parts[0];
            for (size_t i = 1; i < parts.size(); ++i) {
                acc = e->kind == Expr::Kind::Add ? add(acc, parts[i]) : mul(acc, parts[i]);
            }
            return acc;
        }
        case Expr::Kind::Sub: return sub(canon(e->lhs), canon(e->rhs));
        case Expr::Kind::Div: return div(canon(e->lhs), canon(e->rhs));
        case Expr::Kind::Pow: return pow(canon(e->lhs), e->expo);
        case Expr::Kind::Call: return call(e->fn, canon(e->arg), e->fn_order);
        default: return e;
    }
}

}  // namespace

TEST_CASE("parse shapes") {
    ExprPtr moll = parse("eps^-1 * bump(x1/eps)");
    REQUIRE(moll->kind == Expr::Kind::Mul);
    CHECK(moll->lhs->kind == Expr::Kind::Pow);
    CHECK(moll->lhs->expo == -1.0);
    CHECK(moll->rhs->kind == Expr::Kind::Call);
    CHECK(moll->rhs->fn == Builtin::Bump);

    // Non-constant exponent rewrites to exp(e * log(base)).
    ExprPtr p34 = parse("(1+x1^2)^(log(1+x1^2)/log(1/eps))");
    REQUIRE(p34->kind == Expr::Kind::Call);
    CHECK(p34->fn == Builtin::Exp);

    ExprPtr oscillatory = parse("bump(x1) * sin(x1/eps)");
    CHECK(oscillatory->kind == Expr::Kind::Mul);
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_WITH_AS(parse("x1 +"), "line 1 col 5: unexpected end of input", Error);
    CHECK_THROWS_AS(parse("foo(x1)"), Error);
    CHECK_THROWS_AS(parse("sin(x1, x2)"), Error);
    CHECK_THROWS_AS(parse("x1 @ 2"), Error);
    CHECK_THROWS_AS(parse("sin x1"), Error);
    try {
        parse("1 +\n  (2 * )");
        FAIL("expected syntax error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("print/parse round-trip over the grammar corpus") {
    for (const char* src : kGrammarCorpus) {
        ExprPtr e = parse(src);
        ExprPtr back = parse(print(e));
        CHECK_MESSAGE(structurally_equal(e, back), "round-trip failed for: ", src,
                      " printed as: ", print(e));
    }
}

TEST_CASE("differentiate basics") {
    ExprPtr sq = parse("x1^2");
    ExprPtr d = differentiate(sq, 0);
    CHECK(structurally_equal(canon(d), canon(parse("2 * x1"))));

    // chain rule through bump: d/dx1 bump(x1/eps) = bumpd1(x1/eps) * eps^-1
    ExprPtr b = differentiate(parse("bump(x1/eps)"), 0);
    double eps = 1.0 / 16;
    for (double x : {0.01, 0.02, 0.55 * eps}) {
        double expect = BumpKernel::instance().deriv(1, x / eps) / eps;
        CHECK(eval1(b, eps, x) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("derivative of the strict-growth family matches finite differences") {
    ExprPtr p34 = parse("(1+x1^2)^(log(1+x1^2)/log(1/eps))");
    ExprPtr d = differentiate(p34, 0);
    double eps = std::exp2(-8), x = 1.5;
    double fd = fd5([&](double t) { return eval1(p34, eps, t); }, x, 1e-3);
    double sym = eval1(d, eps, x);
    CHECK(sym == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("eval examples") {
    ExprPtr moll = parse("eps^-1 * bump(x1/eps)");
    CHECK(eval1(moll, 1.0 / 16, 0.0) == doctest::Approx(16.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(eval1(parse("bump(x1)"), 0.5, 2.0) == 0.0);
    CHECK(eval1(parse("gauss(x1)"), 0.5, 0.0) == 1.0);
    CHECK_THROWS_AS(eval1(parse("log(x1)"), 0.5, -1.0), Error);
    try {
        eval1(parse("log(0 - x1)"), 0.5, 2.0);
        FAIL("expected domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::Domain);
        CHECK(std::string(e.what()).find("col") != std::string::npos);
    }
}

TEST_CASE("log-space evaluation survives astronomically large magnitudes") {
    // exp(1/eps) * bump(x1) at eps = 2^-24 is e^(2^24), far beyond doubles.
    ExprPtr e = parse("exp(1/eps) * bump(x1)");
    double eps = std::exp2(-24);
    double xs[1] = {0.0};
    LogComplex v = eval(e, eps, std::span<const double>(xs, 1));
    CHECK(v.log_mag == doctest::Approx(1.0 / eps - 1.0).epsilon(1e-12));
}

TEST_CASE("family_from_expr: mollifier closed-form derivatives") {
    Family fam = family_from_expr(parse("eps^-1 * bump(x1/eps)"), 1, 16, "mollifier");
    // deriv_rule(k, eps, x) = eps^{-1-k} phi^(k)(x/eps)
    double eps = 1.0 / 32;
    for (int k : {0, 1, 2, 5}) {
        for (double x : {0.0, 0.4 * eps, -0.7 * eps}) {
            double xs[1] = {x};
            double got = fam.deriv({k}, eps, std::span<const double>(xs, 1)).real();
            double expect =
                std::pow(eps, -1.0 - k) * BumpKernel::instance().deriv(k, x / eps);
            CHECK(got == doctest::Approx(expect).epsilon(1e-9));
        }
    }
    // order beyond the cap is an explicit error
    CHECK_THROWS_AS(fam.deriv({17}, eps, std::span<const double>()), Error);
}

TEST_CASE("family_from_expr: constants and the strict-growth log form") {
    Family one = family_from_expr(parse("1"), 1, 16, "one");
    double xs[1] = {0.3};
    CHECK(one.deriv({0}, 0.25, std::span<const double>(xs, 1)).real() == 1.0);
    for (int k : {1, 2, 3}) {
        CHECK(one.deriv({k}, 0.25, std::span<const double>(xs, 1)).is_zero());
    }

    Family p34 = family_from_expr(parse("(1+x1^2)^(log(1+x1^2)/log(1/eps))"), 1, 8, "p34");
    // log-value at |x| = eps^-m is ln(1+eps^-2m)^2 / ln(1/eps) >= m^2 ln(1/eps)
    for (int m : {1, 2, 3}) {
        double eps = std::exp2(-12);
        double x = std::pow(eps, -m);
        double xs2[1] = {x};
        LogComplex v = p34.deriv({0}, eps, std::span<const double>(xs2, 1));
        CHECK(v.log_mag >= m * m * std::log(1.0 / eps));
        double expect = std::pow(std::log1p(x * x), 2.0) / std::log(1.0 / eps);
        CHECK(v.log_mag == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("mixed partials commute") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (const char* src :
         {"x1^2 * x2^3", "sin(x1 * x2)", "gauss(x1) * exp(x2)", "log(1 + x1^2 + x2^2)"}) {
        ExprPtr e = parse(src);
        ExprPtr dxy = differentiate(differentiate(e, 0), 1);
        ExprPtr dyx = differentiate(differentiate(e, 1), 0);
        for (int i = 0; i < 100; ++i) {
            double xs[2] = {u(rng), u(rng)};
            double a = eval(dxy, 0.5, std::span<const double>(xs, 2)).real();
            double b = eval(dyx, 0.5, std::span<const double>(xs, 2)).real();
            CHECK(a == doctest::Approx(b).epsilon(1e-8));
        }
    }
    // structural agreement after canonicalization on polynomial cases
    ExprPtr e = parse("x1^2 * x2^2");
    CHECK(structurally_equal(canon(differentiate(differentiate(e, 0), 1)),
                             canon(differentiate(differentiate(e, 1), 0))));
}

TEST_CASE("symbolic derivatives match finite differences across the corpus") {
    std::mt19937 rng(202408);
    std::uniform_real_distribution<double> interior(-0.8, 0.8);
    for (const char* src : {"gauss(x1)", "sin(x1) * cos(2 * x1)", "log(1 + x1^2)",
                            "sqrt(1 + x1^2)", "x1^3 - 2 * x1", "exp(x1) / (1 + x1^2)"}) {
        ExprPtr e = parse(src);
        ExprPtr d = differentiate(e, 0);
        for (int i = 0; i < 100; ++i) {
            double x = interior(rng);
            double fd = fd5([&](double t) { return eval1(e, 0.5, t); }, x, 1e-4);
            double sym = eval1(d, 0.5, x);
            CHECK(std::abs(sym - fd) <=
                  std::max(1e-6 * std::max(std::abs(sym), std::abs(fd)), 1e-10));
        }
    }
}

TEST_CASE("bump kernel recurrence against finite differences and parity") {
    const BumpKernel& k = BumpKernel::instance();
    // phi^(j) versus 5-point FD of phi^(j-1), inductively anchoring all orders.
    for (int j = 1; j <= 12; ++j) {
        for (double t : {-0.62, -0.21, 0.17, 0.44, 0.73}) {
            double fd = fd5([&](double s) { return k.deriv(j - 1, s); }, t, 2e-4);
            double closed = k.deriv(j, t);
            CHECK(std::abs(closed - fd) <=
                  std::max(2e-7 * std::max(std::abs(closed), std::abs(fd)), 1e-9));
        }
    }
    // even derivatives at 0 are nonzero, odd ones vanish
    for (int j = 0; j <= BumpKernel::kMaxOrder; ++j) {
        if (j % 2 == 0) {
            CHECK(k.deriv_at_zero(j) != 0.0);
        } else {
            CHECK(k.deriv_at_zero(j) == 0.0);
        }
    }
    // support boundary: all derivatives vanish at |t| >= 1
    for (int j = 0; j <= 6; ++j) {
        CHECK(k.deriv(j, 1.0) == 0.0);
        CHECK(k.deriv(j, -1.0) == 0.0);
        CHECK(k.deriv(j, 1.5) == 0.0);
    }
    // moments: odd vanish; M_0 twice the half-line Gauss-Legendre oracle
    CHECK(k.moment(1) == 0.0);
    CHECK(k.moment(3) == 0.0);
    double oracle =
        2.0 * gauss_legendre([&](double s) { return k.deriv(0, s); }, 0.0, 1.0, 32);
    CHECK(k.moment(0) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("plateau cutoff") {
    const PlateauCutoff& chi = PlateauCutoff::instance();
    CHECK(chi.value(0.0) == 1.0);
    CHECK(chi.value(0.999) == 1.0);
    CHECK(chi.value(2.0) == 0.0);
    CHECK(chi.value(1.5) > 0.0);
    CHECK(chi.value(1.5) < 1.0);
    CHECK(chi.value(-1.5) == chi.value(1.5));
    CHECK(chi.deriv(1, 0.5) == 0.0);
    CHECK(chi.deriv(1, 2.5) == 0.0);
    double fd = fd5([&](double t) { return chi.value(t); }, 1.4, 1e-4);
    CHECK(chi.deriv(1, 1.4) == doctest::Approx(fd).epsilon(1e-6));
    fd = fd5([&](double t) { return chi.deriv(1, t); }, 1.4, 1e-4);
    CHECK(chi.deriv(2, 1.4) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("oscillation detection") {
    Family f = family_from_expr(parse("bump(x1) * sin(x1/eps)"), 1, 8, "osc");
    REQUIRE(f.oscillation().has_value());
    CHECK(f.oscillation()->osc == OscillatoryForm::Osc::Sin);
    CHECK(f.oscillation()->freq_scale == 1.0);

    Family g = family_from_expr(parse("bump(x1) * sin(3 * x1/eps)"), 1, 8, "osc3");
    REQUIRE(g.oscillation().has_value());
    CHECK(g.oscillation()->freq_scale == 3.0);

    CHECK_FALSE(family_from_expr(parse("bump(x1)"), 1, 8, "plain").oscillation());
    CHECK_FALSE(
        family_from_expr(parse("sin(x1/eps) * sin(2 * x1/eps)"), 1, 8, "two").oscillation());
}

TEST_CASE("family file parsing") {
    FamilyFile f = parse_family_file(
        "# a mollifier\n"
        "dim = 1\n"
        "name = moll\n"
        "u = eps^-1 * bump(x1/eps)\n");
    CHECK(f.dim == 1);
    CHECK(f.name == "moll");
    CHECK(structurally_equal(f.u, parse("eps^-1 * bump(x1/eps)")));

    CHECK_THROWS_AS(parse_family_file("dim = 1\n"), Error);              // no u
    CHECK_THROWS_AS(parse_family_file("dim = 1\nu = x2\n"), Error);      // x2 beyond dim
    CHECK_THROWS_AS(parse_family_file("dim = zero\nu = x1\n"), Error);   // bad dim
    CHECK_THROWS_AS(parse_family_file("mystery = 1\nu = x1\n"), Error);  // unknown key
}
