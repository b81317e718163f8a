#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gfa/family.hpp"
#include "gfa/report.hpp"

namespace gfa {

/// Sampling region for sup/inf sweeps. Radii that depend on eps are resolved
/// when the region is instantiated at a concrete eps. Centers can be carried
/// anchor-relative so that positions below the ulp of the anchor (sharp balls
/// of high order) stay representable.
struct RegionSpec {
    enum class Kind { Ball, Annulus, Exterior, ClassicalBall, SharpBall };

    Kind kind = Kind::Ball;
    int m = 1;            // Ball: |x| <= eps^-m; Annulus: eps^-m..eps^-m-1; Exterior: |x| >= eps^-1/m
    double radius = 1.0;  // ClassicalBall radius
    std::vector<double> center;                  // ClassicalBall center (absolute)
    int center_anchor = -1;                      // anchored center (1-d)
    std::function<double(double)> center_offset;  // offset against the anchor, per eps
    int sharp_n = 1;                             // SharpBall: |x - c_eps| <= eps^n
    double exterior_truncation_m = 4.0;

    static RegionSpec ball(int m);
    static RegionSpec annulus(int m);
    static RegionSpec exterior(int m, double truncation_m = 4.0);
    static RegionSpec classical_ball(std::vector<double> c, double r);
    static RegionSpec classical_ball_anchored(int anchor, double r);
    static RegionSpec sharp_ball(int anchor, std::function<double(double)> offset, int n);

    std::string describe() const;
};

struct ExtremumResult {
    double log_mag = -kInf;   // natural-log magnitude of the extremum
    bool empty_region = false;
    bool exact_zero_hit = false;  // a sampled value was exactly zero (inf sweeps)
    int arg_anchor = -1;
    std::vector<double> arg;  // offset against arg_anchor (1-d) or absolute point
};

/// Maximum (or minimum) of |d^alpha u_eps| over the region at a fixed eps.
/// Deterministic sampling: a base grid per interval/box, per-octave subgrids
/// on wide 1-d intervals, the family's focus patches, then local dyadic
/// refinement rounds near the detected extremum.
ExtremumResult extremum_on_region(const Family& fam, const MultiIndex& alpha, double eps,
                                  const RegionSpec& region, const SampleParams& sp,
                                  bool minimize = false);

inline ExtremumResult sup_on_region(const Family& fam, const MultiIndex& alpha, double eps,
                                    const RegionSpec& region, const SampleParams& sp) {
    return extremum_on_region(fam, alpha, eps, region, sp, false);
}

/// Sup of |x|^moment_pow * |d^alpha u_eps(x)| over the whole line, truncated
/// at the support radius or eps^-truncation_m; multi-scale sampled (1-d).
ExtremumResult sup_moment_line(const Family& fam, const MultiIndex& alpha, int moment_pow,
                               double eps, double truncation_m, const SampleParams& sp);

}  // namespace gfa
