#include "gfa/region.hpp"

#include <algorithm>
#include <cmath>

namespace gfa {

RegionSpec RegionSpec::ball(int m) {
    RegionSpec r;
    r.kind = Kind::Ball;
    r.m = m;
    return r;
}

RegionSpec RegionSpec::annulus(int m) {
    RegionSpec r;
    r.kind = Kind::Annulus;
    r.m = m;
    return r;
}

RegionSpec RegionSpec::exterior(int m, double truncation_m) {
    RegionSpec r;
    r.kind = Kind::Exterior;
    r.m = m;
    r.exterior_truncation_m = truncation_m;
    return r;
}

RegionSpec RegionSpec::classical_ball(std::vector<double> c, double radius) {
    RegionSpec r;
    r.kind = Kind::ClassicalBall;
    r.center = std::move(c);
    r.radius = radius;
    return r;
}

RegionSpec RegionSpec::classical_ball_anchored(int anchor, double radius) {
    RegionSpec r;
    r.kind = Kind::ClassicalBall;
    r.center_anchor = anchor;
    r.radius = radius;
    return r;
}

RegionSpec RegionSpec::sharp_ball(int anchor, std::function<double(double)> offset, int n) {
    RegionSpec r;
    r.kind = Kind::SharpBall;
    r.center_anchor = anchor;
    r.center_offset = std::move(offset);
    r.sharp_n = n;
    return r;
}

std::string RegionSpec::describe() const {
    switch (kind) {
        case Kind::Ball: return "ball_m" + std::to_string(m);
        case Kind::Annulus: return "annulus_m" + std::to_string(m);
        case Kind::Exterior: return "exterior_m" + std::to_string(m);
        case Kind::ClassicalBall: return "ball_r" + std::to_string(radius);
        case Kind::SharpBall: return "sharp_n" + std::to_string(sharp_n);
    }
    return "?";
}

namespace {

/// 1-d candidate interval in offset coordinates against `anchor`.
struct Segment {
    int anchor = -1;
    double lo = 0.0, hi = 0.0;
};

struct Best {
    double log_mag;
    int anchor = -1;
    double offset = 0.0;
    double step = 0.0;
    double seg_lo = 0.0, seg_hi = 0.0;  // bounds of the segment holding the extremum
    bool any = false;
    bool zero_hit = false;

    explicit Best(bool minimize) : log_mag(minimize ? kInf : -kInf) {}
};

void consider(Best& best, bool minimize, double lm, int anchor, double offset, double step,
              double seg_lo, double seg_hi) {
    if (lm == -kInf) best.zero_hit = true;
    bool better = minimize ? lm < best.log_mag : lm > best.log_mag;
    if (!best.any || better) {
        best.log_mag = lm;
        best.anchor = anchor;
        best.offset = offset;
        best.step = step;
        best.seg_lo = seg_lo;
        best.seg_hi = seg_hi;
        best.any = true;
    }
}

void sample_segment(const Family& fam, const MultiIndex& alpha, double eps, const Segment& seg,
                    int n, Best& best, bool minimize) {
    if (!(seg.hi > seg.lo)) {
        if (seg.hi == seg.lo) {
            LogComplex v = fam.deriv_at(alpha, eps, seg.anchor, seg.lo);
            consider(best, minimize, v.log_mag, seg.anchor, seg.lo, 0.0, seg.lo, seg.hi);
        }
        return;
    }
    n = std::max(n, 3);
    double step = (seg.hi - seg.lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        // Convex combination keeps symmetric endpoints exact (0 is hit
        // exactly on [-R, R]; the invertibility test relies on that).
        double off = ((n - 1 - i) * seg.lo + i * seg.hi) / (n - 1);
        LogComplex v = fam.deriv_at(alpha, eps, seg.anchor, off);
        if (!v.is_zero() && !std::isfinite(v.log_mag)) {
            throw Error(Error::Kind::Domain, "non-finite family value in region sweep");
        }
        consider(best, minimize, v.log_mag, seg.anchor, off, step, seg.lo, seg.hi);
    }
}

/// Per-octave subgrids for intervals spanning many scales, both signs
/// covered by the caller; positions log-spaced so peaks at any scale are
/// seen at proportional resolution.
void sample_octaves(const Family& fam, const MultiIndex& alpha, double eps, double from,
                    double to, int pts, Best& best, bool minimize) {
    double lo = std::max(from, 1e-8);
    if (to <= lo * 16.0) return;
    double a = lo;
    while (a < to) {
        double b = std::min(a * 2.0, to);
        sample_segment(fam, alpha, eps, Segment{-1, a, b}, pts, best, minimize);
        sample_segment(fam, alpha, eps, Segment{-1, -b, -a}, pts, best, minimize);
        a = b;
    }
}

struct SegmentSet {
    std::vector<Segment> segments;
    bool empty = false;
    double octave_from = 0.0, octave_to = -1.0;  // valid when to >= from
};

SegmentSet build_segments_1d(const Family& fam, double eps, const RegionSpec& region) {
    SegmentSet out;
    switch (region.kind) {
        case RegionSpec::Kind::Ball: {
            double R = std::pow(eps, -static_cast<double>(region.m));
            out.segments.push_back({-1, -R, R});
            if (R > 64.0) {
                out.octave_from = 1.0;
                out.octave_to = R;
            }
            break;
        }
        case RegionSpec::Kind::Annulus: {
            double R1 = std::pow(eps, -static_cast<double>(region.m));
            double R2 = std::pow(eps, -static_cast<double>(region.m + 1));
            out.segments.push_back({-1, R1, R2});
            out.segments.push_back({-1, -R2, -R1});
            out.octave_from = R1;
            out.octave_to = R2;
            break;
        }
        case RegionSpec::Kind::Exterior: {
            double R0 = std::pow(eps, -1.0 / region.m);
            auto support = fam.support_radius(eps);
            if (support && *support <= R0) {
                out.empty = true;  // family vanishes on the whole region
                break;
            }
            double T = support ? *support : std::pow(eps, -region.exterior_truncation_m);
            T = std::max(T, R0 * 2.0);
            out.segments.push_back({-1, R0, T});
            out.segments.push_back({-1, -T, -R0});
            out.octave_from = R0;
            out.octave_to = T;
            break;
        }
        case RegionSpec::Kind::ClassicalBall: {
            // anchor -1 with an offset is simply an absolute center
            double off = region.center_offset
                             ? region.center_offset(eps)
                             : (region.center.empty() ? 0.0 : region.center[0]);
            out.segments.push_back(
                {region.center_anchor, off - region.radius, off + region.radius});
            break;
        }
        case RegionSpec::Kind::SharpBall: {
            double r = std::pow(eps, static_cast<double>(region.sharp_n));
            double off = region.center_offset ? region.center_offset(eps) : 0.0;
            out.segments.push_back({region.center_anchor, off - r, off + r});
            break;
        }
    }
    return out;
}

bool intersect_into_frame(const Family& fam, const Segment& seg, const FocusPatch& patch,
                          Segment& out) {
    // Translate the segment bounds into the patch's anchor frame. Subtraction
    // of nearby doubles is exact, so thin patches keep full resolution.
    double shift = fam.anchor_position(seg.anchor) - fam.anchor_position(patch.anchor);
    double lo = std::max(patch.center - patch.halfwidth, seg.lo + shift);
    double hi = std::min(patch.center + patch.halfwidth, seg.hi + shift);
    if (!(lo <= hi)) return false;
    out = {patch.anchor, lo, hi};
    return true;
}

void refine(const Family& fam, const MultiIndex& alpha, double eps, const SampleParams& sp,
            Best& best, bool minimize) {
    for (int round = 0; round < sp.refine_rounds; ++round) {
        if (!best.any || best.step <= 0.0) return;
        // Stay inside the segment that produced the extremum; stepping past a
        // region boundary would admit out-of-region points.
        Segment local{best.anchor, std::max(best.offset - best.step, best.seg_lo),
                      std::min(best.offset + best.step, best.seg_hi)};
        Best cand(minimize);
        sample_segment(fam, alpha, eps, local, sp.refine_points, cand, minimize);
        if (!cand.any) return;
        bool better = minimize ? cand.log_mag <= best.log_mag : cand.log_mag >= best.log_mag;
        if (better) {
            bool zero_seen = best.zero_hit || cand.zero_hit;
            best = cand;
            best.zero_hit = zero_seen;
        } else {
            best.step = cand.step;
        }
    }
}

ExtremumResult extremum_1d(const Family& fam, const MultiIndex& alpha, double eps,
                           const RegionSpec& region, const SampleParams& sp, bool minimize) {
    SegmentSet set = build_segments_1d(fam, eps, region);
    ExtremumResult res;
    if (set.empty) {
        res.empty_region = true;
        res.log_mag = -kInf;
        return res;
    }
    Best best(minimize);
    std::vector<FocusPatch> patches = fam.focus_patches(eps);
    if (auto support = fam.support_radius(eps)) {
        // The support is an implicit focus patch: thin supports inside huge
        // regions would otherwise fall between base samples.
        patches.push_back(FocusPatch{-1, 0.0, *support});
    }
    for (const Segment& seg : set.segments) {
        sample_segment(fam, alpha, eps, seg, sp.base_points, best, minimize);
        for (const FocusPatch& patch : patches) {
            Segment focus;
            if (intersect_into_frame(fam, seg, patch, focus)) {
                sample_segment(fam, alpha, eps, focus, sp.focus_points, best, minimize);
            }
        }
    }
    if (set.octave_to >= set.octave_from) {
        // Clip octave sweeps to the region (both signs already in segments).
        sample_octaves(fam, alpha, eps, set.octave_from, set.octave_to, sp.octave_points, best,
                       minimize);
    }
    if (!best.any) {
        res.empty_region = true;
        res.log_mag = -kInf;
        return res;
    }
    refine(fam, alpha, eps, sp, best, minimize);
    res.log_mag = best.log_mag;
    res.exact_zero_hit = best.zero_hit;
    res.arg_anchor = best.anchor;
    res.arg = {best.offset};
    return res;
}

// ---------------------------------------------------------------------------
// d >= 2: tensor box with a membership mask and box-shrinking refinement.

struct BoxRegion {
    std::vector<double> lo, hi;
    std::function<bool(std::span<const double>)> member;
    bool empty = false;
};

BoxRegion build_box(const Family& fam, double eps, const RegionSpec& region) {
    int d = fam.dim();
    BoxRegion box;
    box.lo.assign(d, 0.0);
    box.hi.assign(d, 0.0);
    auto norm = [](std::span<const double> x) {
        double s = 0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    };
    switch (region.kind) {
        case RegionSpec::Kind::Ball: {
            double R = std::pow(eps, -static_cast<double>(region.m));
            for (int i = 0; i < d; ++i) {
                box.lo[i] = -R;
                box.hi[i] = R;
            }
            box.member = [norm, R](std::span<const double> x) { return norm(x) <= R; };
            break;
        }
        case RegionSpec::Kind::Annulus: {
            double R1 = std::pow(eps, -static_cast<double>(region.m));
            double R2 = std::pow(eps, -static_cast<double>(region.m + 1));
            for (int i = 0; i < d; ++i) {
                box.lo[i] = -R2;
                box.hi[i] = R2;
            }
            box.member = [norm, R1, R2](std::span<const double> x) {
                double r = norm(x);
                return r >= R1 && r <= R2;
            };
            break;
        }
        case RegionSpec::Kind::Exterior: {
            double R0 = std::pow(eps, -1.0 / region.m);
            auto support = fam.support_radius(eps);
            if (support && *support <= R0) {
                box.empty = true;
                return box;
            }
            double T = support ? *support : std::pow(eps, -region.exterior_truncation_m);
            T = std::max(T, 2.0 * R0);
            for (int i = 0; i < d; ++i) {
                box.lo[i] = -T;
                box.hi[i] = T;
            }
            box.member = [norm, R0](std::span<const double> x) { return norm(x) >= R0; };
            break;
        }
        case RegionSpec::Kind::ClassicalBall: {
            std::vector<double> c = region.center;
            if (c.empty()) c.assign(d, 0.0);
            for (int i = 0; i < d; ++i) {
                box.lo[i] = c[i] - region.radius;
                box.hi[i] = c[i] + region.radius;
            }
            double R = region.radius;
            box.member = [c, R](std::span<const double> x) {
                double s = 0;
                for (size_t i = 0; i < c.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
                return std::sqrt(s) <= R;
            };
            break;
        }
        case RegionSpec::Kind::SharpBall:
            throw Error(Error::Kind::InvalidInput, "sharp balls are 1-d only");
    }
    return box;
}

ExtremumResult extremum_nd(const Family& fam, const MultiIndex& alpha, double eps,
                           const RegionSpec& region, const SampleParams& sp, bool minimize) {
    BoxRegion box = build_box(fam, eps, region);
    ExtremumResult res;
    if (box.empty) {
        res.empty_region = true;
        return res;
    }
    int d = fam.dim();
    int per_axis = d == 2 ? 65 : 17;
    std::vector<double> lo = box.lo, hi = box.hi;
    double best_lm = minimize ? kInf : -kInf;
    std::vector<double> best_x;
    bool zero_hit = false;
    for (int round = 0; round <= sp.refine_rounds; ++round) {
        std::vector<int> idx(d, 0);
        std::vector<double> x(d);
        bool done = false;
        while (!done) {
            for (int i = 0; i < d; ++i) {
                x[i] = ((per_axis - 1 - idx[i]) * lo[i] + idx[i] * hi[i]) / (per_axis - 1);
            }
            if (box.member(x)) {
                LogComplex v = fam.deriv(alpha, eps, x);
                if (v.is_zero()) zero_hit = true;
                bool better = minimize ? v.log_mag < best_lm : v.log_mag > best_lm;
                if (best_x.empty() || better) {
                    best_lm = v.log_mag;
                    best_x = x;
                }
            }
            int axis = 0;
            while (axis < d) {
                if (++idx[axis] < per_axis) break;
                idx[axis] = 0;
                ++axis;
            }
            done = axis == d;
        }
        if (best_x.empty()) break;
        for (int i = 0; i < d; ++i) {
            double w = (hi[i] - lo[i]) / 8.0;
            lo[i] = std::max(box.lo[i], best_x[i] - w);
            hi[i] = std::min(box.hi[i], best_x[i] + w);
        }
    }
    if (best_x.empty()) {
        res.empty_region = true;
        return res;
    }
    res.log_mag = best_lm;
    res.exact_zero_hit = zero_hit;
    res.arg = best_x;
    return res;
}

}  // namespace

ExtremumResult extremum_on_region(const Family& fam, const MultiIndex& alpha, double eps,
                                  const RegionSpec& region, const SampleParams& sp,
                                  bool minimize) {
    if (fam.dim() == 1) return extremum_1d(fam, alpha, eps, region, sp, minimize);
    return extremum_nd(fam, alpha, eps, region, sp, minimize);
}

ExtremumResult sup_moment_line(const Family& fam, const MultiIndex& alpha, int moment_pow,
                               double eps, double truncation_m, const SampleParams& sp) {
    if (fam.dim() != 1) {
        throw Error(Error::Kind::InvalidInput, "moment sups are 1-d only");
    }
    auto support = fam.support_radius(eps);
    double T = support ? *support : std::pow(eps, -truncation_m);
    Best best(false);
    auto weigh = [&](double off, int anchor, double step, double blo, double bhi) {
        LogComplex v = fam.deriv_at(alpha, eps, anchor, off);
        if (v.is_zero()) {
            consider(best, false, -kInf, anchor, off, step, blo, bhi);
            return;
        }
        double x = fam.anchor_position(anchor) + off;
        double lm = v.log_mag;
        if (moment_pow > 0) {
            if (x == 0.0) {
                consider(best, false, -kInf, anchor, off, step, blo, bhi);
                return;
            }
            lm += moment_pow * std::log(std::abs(x));
        }
        consider(best, false, lm, anchor, off, step, blo, bhi);
    };
    // Core interval plus octaves out to the truncation radius.
    int n = sp.base_points;
    double core = std::min(4.0, T);
    double core_step = 2 * core / (n - 1);
    for (int i = 0; i < n; ++i) {
        weigh(((n - 1 - i) * -core + i * core) / (n - 1), -1, core_step, -T, T);
    }
    double a = core;
    while (a < T) {
        double b = std::min(a * 2.0, T);
        double step = (b - a) / (sp.octave_points - 1);
        for (int i = 0; i < sp.octave_points; ++i) {
            double off = ((sp.octave_points - 1 - i) * a + i * b) / (sp.octave_points - 1);
            weigh(off, -1, step, -T, T);
            weigh(-off, -1, step, -T, T);
        }
        a = b;
    }
    for (const FocusPatch& patch : fam.focus_patches(eps)) {
        double step = 2 * patch.halfwidth / (sp.focus_points - 1);
        for (int i = 0; i < sp.focus_points; ++i) {
            double off = ((sp.focus_points - 1 - i) * (patch.center - patch.halfwidth) +
                          i * (patch.center + patch.halfwidth)) /
                         (sp.focus_points - 1);
            weigh(off, patch.anchor, step, patch.center - patch.halfwidth,
                  patch.center + patch.halfwidth);
        }
    }
    ExtremumResult res;
    if (!best.any) {
        res.empty_region = true;
        return res;
    }
    for (int round = 0; round < sp.refine_rounds && best.step > 0; ++round) {
        double lo = std::max(best.offset - best.step, best.seg_lo);
        double hi = std::min(best.offset + best.step, best.seg_hi);
        double step = (hi - lo) / (sp.refine_points - 1);
        Best keep = best;
        for (int i = 0; i < sp.refine_points; ++i) {
            weigh(((sp.refine_points - 1 - i) * lo + i * hi) / (sp.refine_points - 1),
                  keep.anchor, step, keep.seg_lo, keep.seg_hi);
        }
        if (best.offset == keep.offset) best.step = step;
    }
    res.log_mag = best.log_mag;
    res.arg_anchor = best.anchor;
    res.arg = {best.offset};
    return res;
}

}  // namespace gfa
