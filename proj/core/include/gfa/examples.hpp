#pragma once

#include <map>

#include "gfa/classify.hpp"

namespace gfa {

/// Configuration of the piecewise double-sequence family: peaks at
/// a_m = 2^-m, active eps values eps_{m,n} = 2^{-n - 1/(m+1)} (dyadic choices
/// keep schedule arithmetic exact; the sequences are pairwise disjoint across
/// m because 1/(m+1) - 1/(m'+1) is never a nonzero integer).
struct Example510Config {
    int m_cap = 6;
    int n_cap = 24;
    int n_first = 1;
};

/// The corrected double-sequence counterexample family
///
///   u_{eps_{m,n}}(x) = eps^{-(m+1)} int_0^x (x-t)^{m-1}/(m-1)! *
///                      phi((t - a_m)/eps^{m+1}) dt,   u_eps = 0 otherwise,
///
/// with closed-form derivatives eps^{-(m+1)(k-m+1)} phi^(k-m)(tau) for
/// k >= m and binomial/moment antiderivative forms for k < m. Evaluation is
/// anchored at the a_m (positions a_m + s eps^{m+1} sit below the ulp of a_m
/// at small eps).
class Example510 {
public:
    explicit Example510(Example510Config cfg);

    const Example510Config& config() const { return cfg_; }
    const Family& family() const { return family_; }

    static double peak(int m) { return std::exp2(-m); }
    static double eps_of(int m, int n) { return std::exp2(-n - 1.0 / (m + 1)); }

    /// (m, n) for an active eps, (0, 0) for the zero branch.
    std::pair<int, int> branch_of(double eps) const;

    /// Geometric grid along the branch-m subsequence (ratio 1/2).
    EpsGrid branch_grid(int m, int n_first, int n_last, int tail) const;

    /// The generalized point x_{eps_{m,n}} = a_m + eps^{m+1}, 0 off-sequence.
    PointNet x0_net() const;
    /// Constant net at a_m.
    PointNet peak_net(int m) const;
    /// Sampled view of x0 on the union grid (double-rounded positions).
    GenPoint x0_genpoint() const;

    /// D^k u at x = a_m + sigma eps^{m+1} through the family's closed forms.
    LogComplex closed_deriv(int m, int n, int k, double sigma) const;
    /// Independent Gauss-Legendre quadrature of the same value.
    LogComplex oracle_deriv(int m, int n, int k, double sigma) const;
    /// Paper point value D^k u(a_m) = eps^{-(m+1)(k-m+1)} phi^(k-m)(0), k >= m.
    LogComplex peak_value(int m, int n, int k) const;
    /// Uniform bound sup_{|x|<=R} |D^k u| <= e^R * l1(phi) for k < m.
    double low_order_bound(double R) const;

private:
    Example510Config cfg_;
    Family family_;
};

Example510 make_example_510(const Example510Config& cfg = {});

/// Runs the five regularity sub-verdicts of the construction (pointwise-star
/// and classical at 0, along-net and sharp-ball at the companion point, and
/// along-net at the peaks) and reports agreement with the expected profile.
/// verify_m_cap bounds the branches probed (<= config m_cap).
ClassificationReport verify_example_510(const Example510Config& cfg, const TestParams& p,
                                        int verify_m_cap = 3);

/// The strict-inclusion witness u_eps(x) = (1+|x|^2)^(ln(1+|x|^2)/ln(1/eps)):
/// moderate on every eps^-m ball, yet the required tempered exponent grows
/// linearly in m.
Family make_prop34_family(int max_order = 8);

// ---------------------------------------------------------------------------
// Canonical family battery.

struct CanonicalFamily {
    Family family;
    /// Expected verdicts keyed by test name; tests absent from the map are
    /// not applicable to the family.
    std::map<std::string, Verdict> expected;
};

/// The shipped battery: bump, gauss, mollifier, modulated bump, oscillatory
/// bump, shifted gauss, x^2, the strict-growth family, the double-sequence
/// family on the default grid, the scaled bump and the zero family.
std::vector<CanonicalFamily> canonical_families();

/// Default grid and lighter sampling parameters for whole-battery runs
/// (recorded in every report).
EpsGrid canonical_grid();
TestParams canonical_params();

// Individual constructors (also used by the Fourier tests).
Family make_bump_family();
Family make_gauss_family();
Family make_mollifier_family();
Family make_modulated_bump_family(double freq_scale = 1.0);
Family make_oscillatory_family();
Family make_shifted_gauss_family();
Family make_poly_family();
Family make_eps_bump_family();
Family make_zero_family();

}  // namespace gfa
