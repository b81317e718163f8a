#include <doctest.h>

#include <cmath>
#include <random>

#include "gfa/scalar.hpp"

using namespace gfa;

namespace {

ExactScalar mono(double c, double a, int b = 0) {
    return ExactScalar::monomial(Complex(c, 0.0), a, b);
}

/// Random exact scalars over dyadic exponents; coefficients bounded away
/// from zero so leading terms cannot vanish.
ExactScalar random_scalar(std::mt19937& rng, int max_terms = 4) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> sixteenths(-48, 48);
    std::uniform_int_distribution<int> logs(-2, 2);
    std::uniform_real_distribution<double> coeff(0.5, 2.0);
    std::bernoulli_distribution sign(0.5);
    std::vector<Term> terms;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        double c = coeff(rng) * (sign(rng) ? 1.0 : -1.0);
        terms.emplace_back(Complex(c, 0.0), sixteenths(rng) / 16.0, logs(rng));
    }
    return ExactScalar::normalize(std::move(terms));
}

}  // namespace

TEST_CASE("normalize merges, cancels and orders terms") {
    // [(1,2,0),(-1,2,0),(3,1,0)] -> [(3,1,0)]
    ExactScalar s = ExactScalar::normalize(
        {Term(Complex(1, 0), 2, 0), Term(Complex(-1, 0), 2, 0), Term(Complex(3, 0), 1, 0)});
    REQUIRE(s.terms().size() == 1);
    CHECK(s.terms()[0].coeff == Complex(3, 0));
    CHECK(s.terms()[0].eps_pow == 1.0);

    CHECK(ExactScalar::normalize({}).is_zero());

    // log term precedes the constant at the same eps power
    ExactScalar t =
        ExactScalar::normalize({Term(Complex(5, 0), 0, 0), Term(Complex(2, 0), 0, 1)});
    REQUIRE(t.terms().size() == 2);
    CHECK(t.terms()[0].log_pow == 1);
    CHECK(t.terms()[1].log_pow == 0);

    CHECK_THROWS_AS(ExactScalar::normalize({Term(Complex(kInf, 0), 0, 0)}), Error);
}

TEST_CASE("ring operations") {
    CHECK((mono(3, 2) + mono(-3, 2)).is_zero());
    CHECK(mono(1, 1) * mono(1, 3) == mono(1, 4));
    // (1 + eps)(1 - eps) = 1 - eps^2, expanded by hand
    ExactScalar lhs = (mono(1, 0) + mono(1, 1)) * (mono(1, 0) - mono(1, 1));
    ExactScalar rhs = mono(1, 0) - mono(1, 2);
    CHECK(lhs == rhs);
}

TEST_CASE("valuation and sharp norm") {
    CHECK(valuation(mono(3, 2)) == 2.0);
    CHECK(valuation(mono(1, 1) + mono(1, 3)) == 1.0);
    CHECK(valuation(ExactScalar()) == kInf);
    CHECK(sharp_norm(mono(3, 2)) == doctest::Approx(std::exp(-2.0)));
    CHECK(sharp_norm(ExactScalar()) == 0.0);
    CHECK(sharp_norm(mono(1, -1)) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("valuation of log(1/eps) is 0: direct inequality sweep") {
    // sup{a : log(1/eps) <= eps^a eventually}: any a < 0 works, no a > 0 does.
    ExactScalar lg = mono(1, 0, 1);
    CHECK(valuation(lg) == 0.0);
    for (double a : {-0.5, -0.1}) {
        // holds on a deep tail (k large enough that 2^{-ak} beats 0.693k)
        bool eventually = true;
        for (int k = 80; k <= 120; ++k) {
            double eps = std::exp2(-k);
            if (!(std::log(1.0 / eps) <= std::pow(eps, a))) eventually = false;
        }
        CHECK(eventually);
    }
    // a = +0.1 fails for small eps
    bool holds_small = true;
    for (int k = 80; k <= 120; ++k) {
        double eps = std::exp2(-k);
        if (!(std::log(1.0 / eps) <= std::pow(eps, 0.1))) holds_small = false;
    }
    CHECK_FALSE(holds_small);
}

TEST_CASE("tends_to_zero") {
    CHECK(tends_to_zero(mono(1, 1, 1)));    // eps*log(1/eps)
    CHECK(tends_to_zero(mono(1, 0, -1)));   // 1/log(1/eps)
    CHECK_FALSE(tends_to_zero(mono(5, 0) + mono(1, 1)));
    CHECK(tends_to_zero(ExactScalar()));
}

TEST_CASE("eval matches direct arithmetic") {
    ExactScalar s = mono(3, 2) + mono(-1, 0, 1);
    double eps = std::exp2(-10);
    double expect = 3 * eps * eps - std::log(1 / eps);
    CHECK(s.eval(eps).real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(s.eval(1.5), Error);
}

TEST_CASE("grid construction and invariants") {
    EpsGrid g = EpsGrid::dyadic();
    CHECK(g.size() == 21);
    CHECK(g.tail_size() == 12);
    CHECK(g.geometric_spacing());
    CHECK(g.eps().front() == std::exp2(-4));
    CHECK(g.eps().back() == std::exp2(-24));

    CHECK_THROWS_AS(EpsGrid::explicit_points({0.5, 0.25, 0.1}, 8, true), Error);  // not geometric
    CHECK_THROWS_AS(EpsGrid::explicit_points({0.5, 0.25, 0.125}, 2, true), Error);  // short tail
    // Non-geometric grids are allowed when declared explicitly.
    EpsGrid u = EpsGrid::explicit_points({0.5, 0.25, 0.1, 0.01}, 2, false);
    CHECK_FALSE(u.geometric_spacing());
}

TEST_CASE("fit_exponent on exact power laws") {
    EpsGrid g = EpsGrid::dyadic();
    SampledScalar s = SampledScalar::from_exact(mono(3, 2), g);
    ExponentFit f = fit_exponent(s);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.max_residual < 1e-9);
    CHECK_FALSE(f.saturated_zero);

    SampledScalar t = SampledScalar::from_exact(mono(1, 1) + mono(1, 2), g);  // eps(1+eps)
    CHECK(fit_exponent(t).slope == doctest::Approx(1.0).epsilon(0.01));

    SampledScalar z = SampledScalar::from_exact(ExactScalar(), g);
    ExponentFit fz = fit_exponent(z);
    CHECK(fz.saturated_zero);
    CHECK(fz.slope == kInf);
}

TEST_CASE("interleave: tags, masks and the per-index oracle") {
    ExactScalar a = mono(1, 1), b = mono(1, 2);
    CHECK(interleave(a, b, Idempotent::all()) == b);
    CHECK(interleave(a, b, Idempotent::none()) == a);
    CHECK_THROWS_AS(interleave(a, b, Idempotent::mask({true, false})), Error);

    EpsGrid g = EpsGrid::dyadic();
    SampledScalar sa = SampledScalar::from_exact(a, g);
    SampledScalar sb = SampledScalar::from_exact(b, g);
    Idempotent even = Idempotent::even_indices(g.size());
    SampledScalar mixed = interleave(sa, sb, even);
    // Direct per-index oracle.
    for (size_t i = 0; i < g.size(); ++i) {
        Complex expect = (i % 2 == 0) ? sb.values[i] : sa.values[i];
        CHECK(mixed.values[i] == expect);
    }
    // Valuation of the interleaved net = min of the per-parity fits -> 1.
    ExponentFit f_even = fit_exponent(SampledScalar(
        g.strided(0, 2), [&] {
            std::vector<Complex> v;
            for (size_t i = 0; i < g.size(); i += 2) v.push_back(mixed.values[i]);
            return v;
        }()));
    ExponentFit f_odd = fit_exponent(SampledScalar(
        g.strided(1, 2), [&] {
            std::vector<Complex> v;
            for (size_t i = 1; i < g.size(); i += 2) v.push_back(mixed.values[i]);
            return v;
        }()));
    CHECK(std::min(f_even.slope, f_odd.slope) == doctest::Approx(1.0).epsilon(0.01));

    EpsGrid other = EpsGrid::dyadic(5, 25);
    CHECK_THROWS_AS(interleave(sa, SampledScalar::from_exact(b, other), even), Error);
}

TEST_CASE("ultrametric and multiplicativity properties") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 1000; ++trial) {
        ExactScalar a = random_scalar(rng);
        ExactScalar b = random_scalar(rng);
        double va = valuation(a), vb = valuation(b);
        double vsum = valuation(a + b);
        CHECK(vsum >= std::min(va, vb));
        if (va != vb) CHECK(vsum == std::min(va, vb));
        CHECK(sharp_norm(a + b) <= std::max(sharp_norm(a), sharp_norm(b)));
        if (!a.is_zero() && !b.is_zero()) {
            CHECK(valuation(a * b) == va + vb);
        }
        CHECK(interleave(a, a, Idempotent::all()) == a);
        CHECK(interleave(a, a, Idempotent::none()) == a);
    }
}

TEST_CASE("fit consistency: sampled exact scalars agree with valuation") {
    // Tail reaching eps <= 2^-16; a single log factor biases the slope by
    // ~1/log(1/eps), inside the 0.1 budget on this grid.
    EpsGrid g = EpsGrid::dyadic(4, 28, 12);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> quarters(-12, 12);
    std::uniform_int_distribution<int> one_log(-1, 1);
    std::uniform_real_distribution<double> coeff(0.5, 2.0);
    int done = 0;
    while (done < 50) {
        // leading term plus a well-separated correction, log power in {-1,0,1}
        double a = quarters(rng) / 4.0;
        int b = one_log(rng);
        double gap = 0.5 + std::abs(quarters(rng)) / 8.0;
        ExactScalar s = mono(coeff(rng), a, b) + mono(coeff(rng), a + gap);
        ExponentFit f = fit_exponent(SampledScalar::from_exact(s, g));
        double tol = b == 0 ? 0.05 : 0.1;
        CHECK(std::abs(f.slope - valuation(s)) <= tol);
        ++done;
    }
}

TEST_CASE("idempotent algebra: complement and respect for ring ops") {
    EpsGrid g = EpsGrid::dyadic();
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto random_sampled = [&] {
        std::vector<Complex> v(g.size());
        for (auto& z : v) z = Complex(u(rng), u(rng));
        return SampledScalar(g, std::move(v));
    };
    for (int trial = 0; trial < 200; ++trial) {
        SampledScalar a1 = random_sampled(), b1 = random_sampled();
        SampledScalar a2 = random_sampled(), b2 = random_sampled();
        std::vector<bool> bits(g.size());
        for (size_t i = 0; i < bits.size(); ++i) bits[i] = rng() & 1;
        Idempotent e = Idempotent::mask(bits);
        // e*e = e and e + e^c = 1 as index selections.
        for (size_t i = 0; i < g.size(); ++i) {
            CHECK((e.member(i) && e.member(i)) == e.member(i));
            CHECK((e.member(i) ^ e.complement().member(i)) == true);
        }
        // interleave(a,a,e) = a
        SampledScalar same = interleave(a1, a1, e);
        for (size_t i = 0; i < g.size(); ++i) CHECK(same.values[i] == a1.values[i]);
        // interleave respects + and * pointwise
        SampledScalar s1 = interleave(a1, b1, e) + interleave(a2, b2, e);
        SampledScalar s2 = interleave(a1 + a2, b1 + b2, e);
        SampledScalar p1 = interleave(a1, b1, e) * interleave(a2, b2, e);
        SampledScalar p2 = interleave(a1 * a2, b1 * b2, e);
        for (size_t i = 0; i < g.size(); ++i) {
            CHECK(s1.values[i] == s2.values[i]);
            CHECK(p1.values[i] == p2.values[i]);
        }
    }
}
