#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "gfa/bump.hpp"
#include "gfa/examples.hpp"

using namespace gfa;

namespace {

double rel_diff(const LogComplex& a, const LogComplex& b) {
    Complex av = a.is_zero() ? Complex(0, 0) : a.dir;
    Complex bv = b.is_zero() ? Complex(0, 0) : b.dir;
    if (a.is_zero() && b.is_zero()) return 0.0;
    if (a.is_zero() || b.is_zero()) return 1.0;
    // compare log-magnitudes and directions separately
    double dl = std::abs(a.log_mag - b.log_mag);
    double dd = std::abs(av - bv);
    return std::max(std::expm1(dl), dd);
}

}  // namespace

TEST_CASE("schedule disjointness across branches") {
    // eps_{m,n} = 2^{-n - 1/(m+1)}: collisions would need
    // 1/(m+1) - 1/(m'+1) integer and nonzero, impossible. Check the exponents
    // as exact rationals n + 1/(m+1) ~ (n(m+1) + 1, m+1).
    std::set<std::pair<long, long>> seen;
    for (int m = 1; m <= 6; ++m) {
        for (int n = 1; n <= 24; ++n) {
            long num = static_cast<long>(n) * (m + 1) + 1;
            long den = m + 1;
            long g = std::gcd(num, den);
            auto key = std::make_pair(num / g, den / g);
            CHECK(seen.insert(key).second);
        }
    }
}

TEST_CASE("double-sequence schedules and the companion point") {
    Example510 ex = make_example_510({});
    // eps_{1,4} = 2^-4.5, x = 2^-1 + 2^-9
    double e14 = Example510::eps_of(1, 4);
    CHECK(e14 == doctest::Approx(std::exp2(-4.5)).epsilon(1e-15));
    auto [anchor, off] = ex.x0_net().at(e14);
    CHECK(anchor == 0);  // a_1
    CHECK(off == doctest::Approx(std::exp2(-9)).epsilon(1e-14));
    CHECK(Example510::peak(1) + off == doctest::Approx(0.5 + std::exp2(-9)));

    // off-sequence eps: zero branch and x = 0
    auto [za, zo] = ex.x0_net().at(0.3);
    CHECK(za == -1);
    CHECK(zo == 0.0);
    CHECK(ex.branch_of(0.3).first == 0);
    double xs[1] = {0.4};
    CHECK(ex.family().deriv({0}, 0.3, std::span<const double>(xs, 1)).is_zero());

    // the sampled view is slow scale and compactly supported in [0, 1]
    GenPoint x0 = ex.x0_genpoint();
    CHECK(classify_scale(x0) == ScaleClass::Slow);
    CHECK(is_compactly_supported(x0, Box({0.0}, {1.0})));
}

TEST_CASE("peak values match the closed form") {
    Example510 ex = make_example_510({});
    // D^k u(a_m) = eps^{-(m+1)(k-m+1)} phi^{(k-m)}(0) for k >= m
    for (int m : {1, 2, 3}) {
        for (int n : {4, 8}) {
            for (int k = m; k <= m + 4; ++k) {
                LogComplex got = ex.closed_deriv(m, n, k, 0.0);
                LogComplex expect = ex.peak_value(m, n, k);
                if (expect.is_zero()) {
                    CHECK(got.is_zero());  // odd kernel orders vanish at 0
                } else {
                    CHECK(got.log_mag == doctest::Approx(expect.log_mag).epsilon(1e-12));
                    CHECK(got.dir.real() == doctest::Approx(expect.dir.real()));
                }
            }
        }
    }
    // at the companion point the high orders vanish identically
    for (int m : {1, 2, 3}) {
        for (int k = m; k <= m + 3; ++k) {
            CHECK(ex.closed_deriv(m, 6, k, 1.0).is_zero());
        }
    }
    // left of the kernel support the family vanishes (x below a_m - eps^{m+1})
    CHECK(ex.closed_deriv(2, 6, 0, -1.5).is_zero());
    double far_left[1] = {-0.5};
    CHECK(ex.family()
              .deriv({0}, Example510::eps_of(2, 6), std::span<const double>(far_left, 1))
              .is_zero());
}

TEST_CASE("low-order bound: sup over a compactum stays under e^R l1(phi)") {
    Example510 ex = make_example_510({});
    double R = 1.0;
    double bound = ex.low_order_bound(R);
    for (int m : {2, 3}) {
        for (int n : {4, 10}) {
            for (int k = 0; k < m; ++k) {
                // probe a spread of points in [-R, R]
                for (double x : {-0.9, 0.1, 0.26, 0.51, 0.9}) {
                    double xs[1] = {x};
                    LogComplex v = ex.family().deriv(
                        {k}, Example510::eps_of(m, n), std::span<const double>(xs, 1));
                    if (!v.is_zero()) {
                        CHECK(v.log_mag <= std::log(bound) + 1e-9);
                    }
                }
            }
        }
    }
}

TEST_CASE("closed form agrees with the quadrature oracle") {
    Example510 ex = make_example_510({});
    // the acceptance sweep is m <= 3, n <= 8, k <= 6; spot a subset here
    for (int m : {1, 2, 3}) {
        for (int n : {4, 8}) {
            for (int k = 0; k <= std::min(6, m + 3); ++k) {
                for (double sigma : {-0.62, -0.21, 0.17, 0.44, 0.73}) {
                    LogComplex closed = ex.closed_deriv(m, n, k, sigma);
                    LogComplex oracle = ex.oracle_deriv(m, n, k, sigma);
                    CHECK_MESSAGE(rel_diff(closed, oracle) <= 1e-6, "m=", m, " n=", n,
                                  " k=", k, " sigma=", sigma);
                }
                if (k < m) {
                    // outside the kernel support the binomial/moment path rules
                    for (double sigma : {1.5, 4.0}) {
                        LogComplex closed = ex.closed_deriv(m, n, k, sigma);
                        LogComplex oracle = ex.oracle_deriv(m, n, k, sigma);
                        CHECK_MESSAGE(rel_diff(closed, oracle) <= 1e-6, "m=", m, " n=", n,
                                      " k=", k, " sigma=", sigma);
                    }
                }
            }
        }
    }
    // quadrature-vs-closed-form at the spec probe (m, n, k, x) = (2, 6, 3,
    // a_2 + 0.3 eps^3)
    CHECK(rel_diff(ex.closed_deriv(2, 6, 3, 0.3), ex.oracle_deriv(2, 6, 3, 0.3)) <= 1e-6);
}

TEST_CASE("strict-growth family point values") {
    Family p34 = make_prop34_family(2);
    // at x = 0 the value is exactly 1 for every eps
    for (double eps : {0.5, std::exp2(-8), std::exp2(-20)}) {
        double xs[1] = {0.0};
        LogComplex v = p34.deriv({0}, eps, std::span<const double>(xs, 1));
        CHECK(v.log_mag == doctest::Approx(0.0));
        CHECK(v.dir.real() == doctest::Approx(1.0));
    }
    // at |x| = eps^-m the value dominates eps^{-m^2}
    for (int m : {1, 2, 3}) {
        double eps = std::exp2(-10);
        double xs[1] = {std::pow(eps, -m)};
        LogComplex v = p34.deriv({0}, eps, std::span<const double>(xs, 1));
        CHECK(v.log_mag >= m * m * std::log(1.0 / eps));
    }
}

TEST_CASE("example510 regularity suite matches the construction") {
    TestParams p = canonical_params();
    p.k_max = 8;
    Example510Config cfg;
    ClassificationReport rep = verify_example_510(cfg, p, 3);
    CHECK(rep.subreports[0].verdict == Verdict::Pass);  // pointstar at 0
    CHECK(rep.subreports[1].verdict == Verdict::Fail);  // classical at 0
    CHECK(rep.subreports[2].verdict == Verdict::Pass);  // along net at x0
    CHECK(rep.subreports[3].verdict == Verdict::Fail);  // sharp ball at x0
    CHECK(rep.subreports[4].verdict == Verdict::Pass);  // peaks all failed
    CHECK(rep.verdict == Verdict::Pass);
}

TEST_CASE("drop slope at the peaks is -(m+1) per order") {
    Example510 ex = make_example_510({});
    TestParams p = canonical_params();
    for (int m : {1, 2, 3}) {
        EpsGrid g = ex.branch_grid(m, 5, 24, 12);
        int k_max = m + 4;
        AkSequence seq = ak_sequence(ex.family(), ex.peak_net(m), k_max, p.radius_schedule, p,
                                     g);
        // fit a line through a_k for k = m..k_max
        std::vector<double> xs, ys;
        for (int k = m; k <= k_max; ++k) {
            REQUIRE(seq.a_k[k] != kInf);
            xs.push_back(k);
            ys.push_back(seq.a_k[k]);
        }
        LineFit fit = fit_line(xs, ys);
        CHECK_MESSAGE(std::abs(fit.slope - (-(m + 1.0))) <= 0.05 * (m + 1.0), "m=", m,
                      " slope=", fit.slope);
        // convexity of -a_k past the drop
        ClassificationReport conv = test_convexity(seq, p);
        CHECK(conv.verdict == Verdict::Pass);
    }
}

TEST_CASE("pointstar and classical verdicts agree across probe points") {
    TestParams p = canonical_params();
    p.k_max = 6;
    EpsGrid g = canonical_grid();
    // bump: both pass everywhere
    for (double x0 : {-0.7, 0.0, 0.3}) {
        AkSequence seq = ak_sequence(make_bump_family(), PointNet::constant(x0), p.k_max,
                                     p.radius_schedule, p, g);
        CHECK(test_pointstar_regular(seq, p).verdict == Verdict::Pass);
        CHECK(test_classical_regular(seq, p).verdict == Verdict::Pass);
    }
    // mollifier at 0: both fail
    AkSequence moll = ak_sequence(make_mollifier_family(), PointNet::constant(0.0), p.k_max,
                                  p.radius_schedule, p, g);
    CHECK(test_pointstar_regular(moll, p).verdict == Verdict::Fail);
    CHECK(test_classical_regular(moll, p).verdict == Verdict::Fail);
}
