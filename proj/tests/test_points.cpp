#include <doctest.h>

#include <cmath>
#include <random>

#include "gfa/points.hpp"

using namespace gfa;

namespace {

ExactScalar mono(double c, double a, int b = 0) {
    return ExactScalar::monomial(Complex(c, 0.0), a, b);
}

GenPoint pt(std::initializer_list<ExactScalar> coords) {
    return GenPoint::exact(std::vector<ExactScalar>(coords));
}

}  // namespace

TEST_CASE("point_norm") {
    // (eps^-1, 0) -> eps^-1
    auto n1 = point_norm(pt({mono(1, -1), ExactScalar()}));
    REQUIRE(std::holds_alternative<ExactScalar>(n1));
    CHECK(std::get<ExactScalar>(n1) == mono(1, -1));

    // (3, 4) -> 5
    auto n2 = point_norm(pt({ExactScalar(3), ExactScalar(4)}));
    REQUIRE(std::holds_alternative<ExactScalar>(n2));
    CHECK(std::get<ExactScalar>(n2) == ExactScalar(5));

    // (eps, eps) -> sqrt(2)*eps; sampling it fits slope 1
    auto n3 = point_norm(pt({mono(1, 1), mono(1, 1)}));
    REQUIRE(std::holds_alternative<ExactScalar>(n3));
    CHECK(std::get<ExactScalar>(n3) == mono(std::sqrt(2.0), 1));
    ExponentFit f =
        fit_exponent(SampledScalar::from_exact(std::get<ExactScalar>(n3), EpsGrid::dyadic()));
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-6));

    // Multi-term coordinate falls back to a sampled norm.
    auto n4 = point_norm(pt({mono(1, 0) + mono(1, 1)}));
    CHECK(std::holds_alternative<SampledScalar>(n4));
}

TEST_CASE("classify_scale on exact points") {
    CHECK(classify_scale(pt({mono(1, 0, 1), ExactScalar()})) == ScaleClass::Slow);
    CHECK(classify_scale(pt({mono(1, -0.5)})) == ScaleClass::Fast);
    CHECK(classify_scale(pt({ExactScalar(5)})) == ScaleClass::Slow);
    CHECK(classify_scale(pt({ExactScalar()})) == ScaleClass::Slow);

    // Exact points are never Neither/Inconclusive: exactly one of Slow/Fast.
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> sixteenths(-32, 32);
    for (int i = 0; i < 200; ++i) {
        GenPoint p = pt({mono(1.5, sixteenths(rng) / 16.0, 0)});
        ScaleClass c = classify_scale(p);
        CHECK((c == ScaleClass::Slow || c == ScaleClass::Fast));
    }
}

TEST_CASE("classify_scale on sampled points") {
    EpsGrid g = EpsGrid::dyadic();
    auto sampled_of = [&](const std::function<double(double)>& f) {
        std::vector<double> c(g.size());
        for (size_t i = 0; i < g.size(); ++i) c[i] = f(g.eps()[i]);
        return GenPoint::sampled(g, {c});
    };
    CHECK(classify_scale(sampled_of([](double e) { return 1.0 / std::sqrt(e); })) ==
          ScaleClass::Fast);
    CHECK(classify_scale(sampled_of([](double) { return 5.0; })) == ScaleClass::Slow);
    // Oscillating between eps and eps^-1 per index: Neither.
    bool flip = false;
    std::vector<double> osc(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        osc[i] = flip ? g.eps()[i] : 1.0 / g.eps()[i];
        flip = !flip;
    }
    CHECK(classify_scale(GenPoint::sampled(g, {osc})) == ScaleClass::Neither);
}

TEST_CASE("is_compactly_supported") {
    Box box1({-1.0}, {1.0});
    CHECK(is_compactly_supported(pt({mono(1, 1)}), box1));
    CHECK_FALSE(is_compactly_supported(pt({mono(1, -1)}), box1));
    // 1 + eps*log(1/eps) in [0, 2]: limit 1, log-corrected approach
    CHECK(is_compactly_supported(pt({mono(1, 0) + mono(1, 1, 1)}), Box({0.0}, {2.0})));
    // log(1/eps) unbounded
    CHECK_FALSE(is_compactly_supported(pt({mono(1, 0, 1)}), Box({0.0}, {100.0})));
    // boundary approach from outside: 1 + eps with box [0, 1]
    CHECK_FALSE(is_compactly_supported(pt({mono(1, 0) + mono(1, 1)}), Box({0.0}, {1.0})));
    // boundary approach from inside: 1 - eps with box [0, 1]
    CHECK(is_compactly_supported(pt({mono(1, 0) - mono(1, 1)}), Box({0.0}, {1.0})));
}

TEST_CASE("infinitely_close") {
    ExactScalar x0(0.7);
    CHECK(infinitely_close(pt({x0 + mono(1, 1)}), pt({x0})));
    // monad membership without positive valuation: x0 + 1/log(1/eps)
    CHECK(infinitely_close(pt({x0 + mono(1, 0, -1)}), pt({x0})));
    CHECK_FALSE(infinitely_close(pt({x0 + ExactScalar(0.1)}), pt({x0})));
}

TEST_CASE("monad behaves like an equivalence on bounded exact points") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> sixteenths(1, 32);
    std::uniform_int_distribution<int> logs(-2, 2);
    for (int i = 0; i < 100; ++i) {
        ExactScalar base(0.3);
        ExactScalar da = mono(1.0, sixteenths(rng) / 16.0, logs(rng));
        ExactScalar db = mono(-0.5, sixteenths(rng) / 16.0, logs(rng));
        GenPoint a = pt({base + da});
        GenPoint b = pt({base + db});
        GenPoint c = pt({base});
        CHECK(infinitely_close(a, a));
        CHECK(infinitely_close(a, c) == infinitely_close(c, a));
        // transitivity: sums of infinitesimals are infinitesimal
        if (infinitely_close(a, b) && infinitely_close(b, c)) {
            CHECK(infinitely_close(a, c));
        }
    }
}

TEST_CASE("sharp_distance") {
    ExactScalar x0(0.25);
    CHECK(sharp_distance(pt({x0 + mono(1, 3)}), pt({x0})) == doctest::Approx(std::exp(-3.0)));
    CHECK(sharp_distance(pt({x0}), pt({x0})) == 0.0);
    // (eps, eps^2) difference: min valuation across coordinates
    GenPoint a = pt({x0 + mono(1, 1), x0 + mono(1, 2)});
    GenPoint b = pt({x0, x0});
    CHECK(sharp_distance(a, b) == doctest::Approx(std::exp(-1.0)));

    // ultrametric triangle inequality on exact points
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> sixteenths(-16, 48);
    for (int i = 0; i < 200; ++i) {
        GenPoint p = pt({mono(1, sixteenths(rng) / 16.0)});
        GenPoint q = pt({mono(1.5, sixteenths(rng) / 16.0)});
        GenPoint r = pt({mono(0.5, sixteenths(rng) / 16.0)});
        double pr = sharp_distance(p, r);
        CHECK(pr <= std::max(sharp_distance(p, q), sharp_distance(q, r)) + 1e-15);
    }
}

TEST_CASE("classical points embed as slow-scale with monad perturbations") {
    GenPoint x0 = GenPoint::classical({0.4, -0.3});
    CHECK(classify_scale(x0) == ScaleClass::Slow);
    GenPoint shifted = pt({ExactScalar(0.4) + mono(1, 1), ExactScalar(-0.3)});
    CHECK(infinitely_close(shifted, x0));
}
