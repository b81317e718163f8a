#include <doctest.h>

#include <cmath>

#include "gfa/bump.hpp"
#include "gfa/classify.hpp"
#include "gfa/examples.hpp"
#include "gfa/parser.hpp"

using namespace gfa;

namespace {

TestParams quick_params() {
    TestParams p = canonical_params();
    p.k_max = 2;
    return p;
}

EpsGrid grid() { return canonical_grid(); }

Family dsl(const char* src, const char* name, int max_order = 12) {
    return family_from_expr(parse(src), 1, max_order, name);
}

}  // namespace

TEST_CASE("sup_on_region: mollifier ball and bump exterior") {
    Family moll = make_mollifier_family();
    TestParams p = quick_params();
    double eps = std::exp2(-10);
    ExtremumResult r = sup_on_region(moll, {0}, eps, RegionSpec::ball(1), p.sample);
    // max of eps^-1 phi(x/eps) is eps^-1 e^-1 at x = 0
    CHECK(r.log_mag == doctest::Approx(std::log(1.0 / eps) - 1.0).epsilon(1e-9));

    Family bump = make_bump_family();
    ExtremumResult e = sup_on_region(bump, {0}, eps, RegionSpec::exterior(1, 4.0), p.sample);
    CHECK(e.empty_region);
    CHECK(e.log_mag == -kInf);
}

TEST_CASE("sup_on_region: strict-growth family boundary sup") {
    // order-0 sup over the m=2 ball at eps = 2^-8 sits between eps^-16 and
    // eps^-17: log2(sup) in (128, 136).
    Family p34 = make_prop34_family(3);
    TestParams p = quick_params();
    double eps = std::exp2(-8);
    ExtremumResult r = sup_on_region(p34, {0}, eps, RegionSpec::ball(2), p.sample);
    double log2_sup = r.log_mag / std::log(2.0);
    CHECK(log2_sup >= 128.0);
    CHECK(log2_sup <= 136.0);
    // direct log-form evaluation at the boundary |x| = eps^-2
    double x = std::pow(eps, -2.0);
    double expect = std::pow(std::log1p(x * x), 2.0) / std::log(1.0 / eps);
    CHECK(r.log_mag == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("test_moderate") {
    TestParams p = quick_params();
    p.k_max = 1;
    ClassificationReport moll = test_moderate(make_mollifier_family(), p, grid());
    CHECK(moll.verdict == Verdict::Pass);
    CHECK(moll.witness_value("N") == 2.0);  // exponents -1 and -2 at k_max = 1

    ClassificationReport p34 = test_moderate(make_prop34_family(2), quick_params(), grid());
    CHECK(p34.verdict == Verdict::Pass);

    ClassificationReport super =
        test_moderate(dsl("exp(1/eps) * bump(x1)", "superpoly"), p, grid());
    CHECK(super.verdict == Verdict::Fail);
}

TEST_CASE("test_negligible") {
    TestParams p = quick_params();
    EpsGrid g = grid();
    Family deep = dsl("exp(0 - 1/eps) * gauss(x1)", "deep");
    ClassificationReport mod = test_moderate(deep, p, g);
    REQUIRE(mod.verdict == Verdict::Pass);
    CHECK(test_negligible(deep, p, g, mod).verdict == Verdict::Pass);

    Family moll = make_mollifier_family();
    ClassificationReport mod2 = test_moderate(moll, p, g);
    ClassificationReport neg = test_negligible(moll, p, g, mod2);
    CHECK(neg.verdict == Verdict::Fail);

    Family cubed = dsl("eps^3 * bump(x1)", "eps3_bump");
    cubed.set_support_radius([](double) { return 1.0; });
    ClassificationReport mod3 = test_moderate(cubed, p, g);
    ClassificationReport neg3 = test_negligible(cubed, p, g, mod3);
    CHECK(neg3.verdict == Verdict::Fail);
    CHECK(neg3.witness_value("failing_n") == 4.0);  // slope exactly 3
    CHECK(neg3.witness_value("slope") == doctest::Approx(3.0).epsilon(1e-6));

    // precondition: a non-moderate family is rejected
    ClassificationReport failed_mod =
        test_moderate(dsl("exp(1/eps) * bump(x1)", "superpoly"), p, g);
    CHECK_THROWS_AS(test_negligible(moll, p, g, failed_mod), Error);
}

TEST_CASE("test_tau") {
    TestParams p = quick_params();
    p.k_max = 1;
    EpsGrid g = grid();
    ClassificationReport poly = test_tau(make_poly_family(), p, g);
    CHECK(poly.verdict == Verdict::Pass);
    CHECK(poly.witness_value("N") == 2.0);  // ball-m sup = eps^-2m

    ClassificationReport p34 = test_tau(make_prop34_family(1), p, g);
    CHECK(p34.verdict == Verdict::Fail);
    // -e(m)/m grows like 4m
    CHECK(p34.witness_value("growth_over_top_half") > 3.0);

    ClassificationReport moll = test_tau(make_mollifier_family(), p, g);
    CHECK(moll.verdict == Verdict::Pass);
}

TEST_CASE("test_schwartz") {
    TestParams p = quick_params();
    p.k_max = 1;
    EpsGrid g = grid();
    CHECK(test_schwartz(make_bump_family(), p, g).verdict == Verdict::Pass);
    CHECK(test_schwartz(make_gauss_family(), p, g).verdict == Verdict::Pass);
    ClassificationReport poly = test_schwartz(make_poly_family(), p, g);
    CHECK(poly.verdict == Verdict::Fail);
}

TEST_CASE("test_slowscale_support") {
    TestParams p = quick_params();
    p.k_max = 1;
    EpsGrid g = grid();
    CHECK(test_slowscale_support(make_bump_family(), p, g).verdict == Verdict::Pass);
    CHECK(test_slowscale_support(make_oscillatory_family(), p, g).verdict == Verdict::Pass);
    ClassificationReport shifted = test_slowscale_support(make_shifted_gauss_family(), p, g);
    CHECK(shifted.verdict == Verdict::Fail);
    CHECK(shifted.witness_value("violating_m") == 1.0);
}

TEST_CASE("cutoff_glue") {
    TestParams p = quick_params();
    // glue(gauss, eps^-1/4): exterior sup at m = 2 becomes exactly 0 beyond
    // the doubled radius.
    Family glued = cutoff_glue(make_gauss_family(), ExactScalar::monomial(1.0, -0.25));
    double eps = std::exp2(-12);
    ExtremumResult r = sup_on_region(glued, {0}, eps, RegionSpec::exterior(2, 4.0), p.sample);
    // exterior radius eps^-1/2 = 64 > 2 eps^-1/4 = 16: empty
    CHECK(r.empty_region);

    // glue(bump, 2): unchanged on [-1, 1]
    Family bump2 = cutoff_glue(make_bump_family(), ExactScalar(2.0));
    for (double x : {-0.9, -0.3, 0.0, 0.5}) {
        double xs[1] = {x};
        double a = bump2.deriv({0}, 0.25, std::span<const double>(xs, 1)).real();
        double b = BumpKernel::instance().deriv(0, x);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
        double da = bump2.deriv({2}, 0.25, std::span<const double>(xs, 1)).real();
        double db = BumpKernel::instance().deriv(2, x);
        CHECK(da == doctest::Approx(db).epsilon(1e-12));
    }

    // glue(strict-growth family, log(1/eps)) passes slow-scale support on a
    // deep grid (the crossover eps^-1/m > 2 log(1/eps) needs small eps).
    Family p34glued =
        cutoff_glue(make_prop34_family(2), ExactScalar::monomial(1.0, 0.0, 1));
    TestParams deep = quick_params();
    deep.k_max = 1;
    EpsGrid dg = EpsGrid::dyadic(8, 32, 12);
    ClassificationReport rep = test_slowscale_support(p34glued, deep, dg);
    CHECK(rep.verdict == Verdict::Pass);
}

TEST_CASE("test_invertible") {
    TestParams p = quick_params();
    EpsGrid g = grid();
    ClassificationReport a = test_invertible(dsl("x1^2 + eps^2", "x2pe2"), p, g);
    CHECK(a.verdict == Verdict::Pass);
    CHECK(a.witness_value("n_m1") == 2.0);
    CHECK(a.witness_value("n_m4", -1.0) == 2.0);

    ClassificationReport b = test_invertible(dsl("x1", "ident"), p, g);
    CHECK(b.verdict == Verdict::Fail);  // zero hit at the sampled midpoint

    ClassificationReport c = test_invertible(dsl("1 + x1^2", "one_plus"), p, g);
    CHECK(c.verdict == Verdict::Pass);
    CHECK(c.witness_value("n_m1") == 0.0);
}

TEST_CASE("ak_sequence: mollifier and bump") {
    TestParams p = quick_params();
    p.k_max = 4;
    EpsGrid g = grid();
    AkSequence moll = ak_sequence(make_mollifier_family(), PointNet::constant(0.0), p.k_max,
                                  p.radius_schedule, p, g);
    for (int k = 0; k <= p.k_max; ++k) {
        CHECK(moll.a_k[k] == doctest::Approx(-1.0 - k).epsilon(0.02));
        CHECK(moll.converged[k]);
    }
    AkSequence bmp = ak_sequence(make_bump_family(), PointNet::constant(0.0), p.k_max,
                                 p.radius_schedule, p, g);
    for (int k = 0; k <= p.k_max; ++k) {
        CHECK(std::abs(bmp.a_k[k]) <= 0.01);
    }

    // monotone radius law: a_k(r) non-decreasing as r decreases
    for (int k = 0; k <= p.k_max; ++k) {
        for (size_t j = 1; j < moll.radii.size(); ++j) {
            CHECK(moll.a_of_r[k][j] >= moll.a_of_r[k][j - 1] - 0.05);
        }
    }

    CHECK(test_pointstar_regular(bmp, p).verdict == Verdict::Pass);
    ClassificationReport moll_star = test_pointstar_regular(moll, p);
    CHECK(moll_star.verdict == Verdict::Fail);
    CHECK(moll_star.witness_value("first_violating_k") == 1.0);

    CHECK(test_classical_regular(bmp, p).verdict == Verdict::Pass);
    CHECK(test_classical_regular(moll, p).verdict == Verdict::Fail);

    // mollifier at x0 = 1: the peak leaves every small ball eventually
    AkSequence away = ak_sequence(make_mollifier_family(), PointNet::constant(1.0), p.k_max,
                                  p.radius_schedule, p, g);
    CHECK(test_pointstar_regular(away, p).verdict == Verdict::Pass);
    CHECK(test_classical_regular(away, p).verdict == Verdict::Pass);
}

TEST_CASE("test_convexity") {
    TestParams p;
    auto synthetic = [&](std::vector<double> a) {
        AkSequence s;
        s.point_desc = "synthetic";
        s.k_max = static_cast<int>(a.size()) - 1;
        s.radii = {0.25, 0.125};
        s.a_k = std::move(a);
        s.converged.assign(s.a_k.size(), true);
        s.a_of_r.assign(s.a_k.size(), std::vector<double>(2, 0.0));
        for (size_t k = 0; k < s.a_k.size(); ++k) {
            s.a_of_r[k][0] = s.a_of_r[k][1] = s.a_k[k];
        }
        return s;
    };
    CHECK(test_convexity(synthetic({0, -2, -4, -6}), p).verdict == Verdict::Pass);
    CHECK(test_convexity(synthetic({0, -3, -4}), p).verdict == Verdict::Fail);
    // no drop: not applicable, reported as pass with a note
    ClassificationReport flat = test_convexity(synthetic({0, 0, 0, 0}), p);
    CHECK(flat.verdict == Verdict::Pass);

    // mollifier at 0: -a_k = 1 + k is linear, hence convex
    TestParams q = quick_params();
    q.k_max = 4;
    AkSequence moll = ak_sequence(make_mollifier_family(), PointNet::constant(0.0), q.k_max,
                                  q.radius_schedule, q, grid());
    CHECK(test_convexity(moll, q).verdict == Verdict::Pass);
}

TEST_CASE("taylor_companion") {
    TestParams p = quick_params();
    // bump family at 0: companion reproduces all computed derivatives at 0
    Family bump = make_bump_family();
    PointNet origin = PointNet::constant(0.0);
    Family comp = taylor_companion(bump, origin, [](double) { return 6; }, 0.5);
    double eps = std::exp2(-6);
    for (int k = 0; k <= 6; ++k) {
        double xs[1] = {0.0};
        Complex a = comp.deriv({k}, eps, std::span<const double>(xs, 1)).to_complex();
        Complex b = bump.deriv({k}, eps, std::span<const double>(xs, 1)).to_complex();
        CHECK(a.real() == doctest::Approx(b.real()).epsilon(1e-12));
    }
    // mollifier companion coefficients are eps^{-1-k} phi^(k)(0)
    Family moll_comp =
        taylor_companion(make_mollifier_family(), origin, [](double) { return 4; }, 0.5);
    for (int k = 0; k <= 4; ++k) {
        double xs[1] = {0.0};
        double got = moll_comp.deriv({k}, eps, std::span<const double>(xs, 1)).real();
        double expect = std::pow(eps, -1.0 - k) * BumpKernel::instance().deriv_at_zero(k);
        CHECK(got == doctest::Approx(expect).epsilon(1e-10));
    }
    // degenerate degree rule: only order 0 matches; order 1 of the companion
    // vanishes at the center (constant times plateau)
    Family flat = taylor_companion(bump, origin, [](double) { return 0; }, 0.5);
    double xs[1] = {0.0};
    CHECK(flat.deriv({0}, eps, std::span<const double>(xs, 1)).real() ==
          doctest::Approx(BumpKernel::instance().deriv(0, 0.0)).epsilon(1e-12));
    CHECK(flat.deriv({1}, eps, std::span<const double>(xs, 1)).is_zero());
    // away from the plateau the companion vanishes
    double far[1] = {0.7};
    CHECK(flat.deriv({0}, eps, std::span<const double>(far, 1)).is_zero());
    (void)p;
}

TEST_CASE("growth hierarchy on the canonical battery") {
    TestParams p = canonical_params();
    p.k_max = 2;
    EpsGrid g = grid();
    for (const CanonicalFamily& cf : canonical_families()) {
        GrowthSuite suite = run_growth_suite(cf.family, p, g);
        auto pass = [](const ClassificationReport& r) { return r.verdict == Verdict::Pass; };
        // slow-scale support => schwartz => tau => moderate
        if (pass(suite.slowscale_support)) {
            CHECK_MESSAGE(pass(suite.schwartz), "hierarchy break (sss->S): ", cf.family.name());
        }
        if (pass(suite.schwartz)) {
            CHECK_MESSAGE(pass(suite.tau), "hierarchy break (S->tau): ", cf.family.name());
        }
        if (pass(suite.tau)) {
            CHECK_MESSAGE(pass(suite.moderate), "hierarchy break (tau->M): ",
                          cf.family.name());
        }
        // measured == annotated for the growth tests
        auto check_expected = [&](const char* name, const ClassificationReport& r) {
            auto it = cf.expected.find(name);
            if (it != cf.expected.end()) {
                CHECK_MESSAGE(r.verdict == it->second, cf.family.name(), ": ", name,
                              " measured ", to_string(r.verdict), " expected ",
                              to_string(it->second));
            }
        };
        check_expected("moderate", suite.moderate);
        check_expected("tau", suite.tau);
        check_expected("schwartz", suite.schwartz);
        check_expected("slowscale_support", suite.slowscale_support);
    }
}
