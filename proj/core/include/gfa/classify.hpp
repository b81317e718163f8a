#pragma once

#include "gfa/points.hpp"
#include "gfa/region.hpp"
#include "gfa/report.hpp"

namespace gfa {

/// A generalized point carried as a per-eps (anchor, offset) rule so that
/// positions below the ulp of the anchor stay exact. anchor -1 = absolute.
struct PointNet {
    std::string name;
    std::function<std::pair<int, double>(double eps)> at;
    /// Classical coordinates for d >= 2 points (1-d machinery uses `at`).
    std::vector<double> classical_coords;

    static PointNet constant(double x0, const std::string& name = "const");
    static PointNet classical(std::vector<double> x0, const std::string& name = "const");
    static PointNet anchored(int anchor, std::function<double(double)> offset,
                             const std::string& name);
};

// ---------------------------------------------------------------------------
// Growth-condition tests over a family and an eps grid.

/// Moderateness on eps^-m balls: Pass with the least N such that every fitted
/// ball exponent stays above -N - tol.
ClassificationReport test_moderate(const Family& fam, const TestParams& p, const EpsGrid& grid);

/// Negligibility via the order-0 characterization; requires a passing
/// moderateness report.
ClassificationReport test_negligible(const Family& fam, const TestParams& p, const EpsGrid& grid,
                                     const ClassificationReport& moderate);

/// Tempered growth: per derivative order a single N with ball-m exponents
/// >= -mN; fails when -e(m)/m keeps growing across the top half of m.
ClassificationReport test_tau(const Family& fam, const TestParams& p, const EpsGrid& grid);

/// Rapid-decrease growth on annuli: for every derivative order and decay
/// order k a single N with annulus-m exponents >= mk - N.
ClassificationReport test_schwartz(const Family& fam, const TestParams& p, const EpsGrid& grid);

/// Slow scale support: exterior sups over |x| >= eps^-1/m decay like eps^m.
/// Sub-reports: the same with derivatives, and the single-N moment bounds.
ClassificationReport test_slowscale_support(const Family& fam, const TestParams& p,
                                            const EpsGrid& grid);

/// Pointwise invertibility: ball-m infima bounded below by powers of eps.
ClassificationReport test_invertible(const Family& fam, const TestParams& p,
                                     const EpsGrid& grid);

/// The four growth tests with shared sup tables.
struct GrowthSuite {
    ClassificationReport moderate;
    ClassificationReport tau;
    ClassificationReport schwartz;
    ClassificationReport slowscale_support;
};
GrowthSuite run_growth_suite(const Family& fam, const TestParams& p, const EpsGrid& grid);

// ---------------------------------------------------------------------------
// Pointwise regularity via the per-order valuation sequence.

/// a_k over shrinking balls around a point: a_k(r) = fitted exponent of the
/// max over |beta| = k of the ball-r sup; a_k = value at the smallest radius
/// with a convergence flag (no extrapolation).
struct AkSequence {
    std::string point_desc;
    int k_max = 0;
    std::vector<double> radii;
    /// a_of_r[k][j] = fitted exponent at radius radii[j] (+inf = identically 0)
    std::vector<std::vector<double>> a_of_r;
    std::vector<double> a_k;
    std::vector<bool> converged;
    std::vector<SweepRow> sweep;
    std::string grid_desc;
};

AkSequence ak_sequence(const Family& fam, const PointNet& x0, int k_max,
                       const std::vector<double>& radii, const TestParams& p,
                       const EpsGrid& grid);

/// Convexity of -a_k past the first confirmed drop.
ClassificationReport test_convexity(const AkSequence& seq, const TestParams& p);

/// Pointwise regularity with per-order neighbourhoods: a_k non-decreasing.
ClassificationReport test_pointstar_regular(const AkSequence& seq, const TestParams& p);

/// Classical pointwise regularity: some single radius works for all orders.
ClassificationReport test_classical_regular(const AkSequence& seq, const TestParams& p);
ClassificationReport test_classical_regular(const Family& fam, const PointNet& x0,
                                            const TestParams& p, const EpsGrid& grid);

/// Regularity at a generalized point: exponents of |d^k u(x_eps)| along the
/// net (check variant) and of sharp-ball sups for some order n (tilde
/// variant).
struct SharpRegularity {
    ClassificationReport along_net;   // single-point variant
    ClassificationReport sharp_ball;  // sharp-neighbourhood variant
};
SharpRegularity test_sharp_regular(const Family& fam, const PointNet& x0, const TestParams& p,
                                   const EpsGrid& grid);

// ---------------------------------------------------------------------------
// Representative constructions.

/// u * chi(x / a_eps) with the plateau cutoff; support hint 2 a_eps.
Family cutoff_glue(const Family& fam, const ExactScalar& radius_net);

/// Truncated Taylor polynomial of u at x0_eps (degree m_eps = degree_rule(eps))
/// times a plateau cutoff of the given radius; derivatives at x0 match u's up
/// to m_eps exactly.
Family taylor_companion(const Family& fam, const PointNet& x0,
                        std::function<int(double)> degree_rule, double cutoff_radius);

// ---------------------------------------------------------------------------
// Shared fitting helpers (used by the Fourier side as well).

struct CellFit {
    ExponentFit fit;
    std::vector<double> logmags;
    bool diverges = false;       // residual past tolerance with a steepening trend
    double window_trend = 0.0;   // deep-window slope minus shallow-window slope
};

/// Fits sup log-magnitudes over the grid tail and runs the super-polynomial
/// divergence detector. direction +1 flags steepening downward (growth),
/// -1 flags steepening upward (decay).
CellFit fit_cell(const EpsGrid& grid, std::vector<double> logmags, const TestParams& p,
                 int direction = +1);

}  // namespace gfa
