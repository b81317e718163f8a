#pragma once

#include <vector>

#include "gfa/numeric.hpp"

namespace gfa {

/// The compactly supported kernel phi(t) = exp(-1/(1-t^2)) on |t| < 1, 0
/// outside, together with its derivatives
///
///   phi^(k)(t) = P_k(t) / (1-t^2)^(2k) * phi(t),
///   P_{k+1} = P_k' (1-t^2)^2 + P_k (4kt(1-t^2) - 2t),  P_0 = 1.
///
/// The recurrence is run once in 128-bit integer arithmetic (coefficients
/// reach ~1.5e20 by order 16, past both int64 and exact-double range) and the
/// polynomials are then stored as doubles for evaluation. phi is even, so
/// phi^(k)(0) = P_k(0)/e vanishes exactly for odd k and is nonzero for every
/// even k <= the supported order.
class BumpKernel {
public:
    static constexpr int kMaxOrder = 16;

    static const BumpKernel& instance();

    /// phi^(k)(t) in log form; exact zero for |t| >= 1.
    LogComplex deriv_log(int k, double t) const;
    double deriv(int k, double t) const { return deriv_log(k, t).real(); }

    /// phi^(k)(0) = P_k(0) * e^{-1}, exact sign and integer prefactor.
    double deriv_at_zero(int k) const;

    /// Moments M_j = integral of s^j phi(s) ds over [-1, 1]; odd ones vanish.
    double moment(int j) const;
    /// integral of |phi| = M_0 (phi >= 0).
    double l1_norm() const { return moment(0); }

    /// Partial integral of s^j phi(s) over [-1, tau], tau in [-1, 1].
    double partial_moment(int j, double tau) const;

    /// Sup-norm of phi^(k) over [-1, 1].
    double sup_abs_deriv(int k) const;

    const std::vector<double>& poly(int k) const;

private:
    BumpKernel();
    std::vector<std::vector<double>> polys_;
    std::vector<double> moments_;
    std::vector<double> sup_abs_;
    std::vector<std::vector<double>> partials_;
};

/// Smoothed-step plateau cutoff chi built from the bump kernel:
/// chi(t) = 1 for |t| <= 1, 0 for |t| >= 2, smooth and even in between via
/// chi(t) = integral_{|t|}^{2} phi(2s-3) ds / integral_1^2 phi(2s-3) ds.
class PlateauCutoff {
public:
    static const PlateauCutoff& instance();

    double value(double t) const;
    /// k-th derivative, exact 0 on the plateau and outside the support.
    double deriv(int k, double t) const;

private:
    PlateauCutoff();
    double norm_;
};

}  // namespace gfa
