#include "gfa/points.hpp"

#include <algorithm>
#include <cmath>

namespace gfa {

const char* to_string(ScaleClass c) {
    switch (c) {
        case ScaleClass::Slow: return "Slow";
        case ScaleClass::Fast: return "Fast";
        case ScaleClass::Neither: return "Neither";
        default: return "Inconclusive";
    }
}

Box::Box(std::vector<double> l, std::vector<double> h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.empty() || lo.size() != hi.size()) {
        throw Error(Error::Kind::InvalidInput, "box bounds must match and be nonempty");
    }
    for (size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] <= hi[i])) throw Error(Error::Kind::InvalidInput, "empty box");
    }
}

GenPoint GenPoint::exact(std::vector<ExactScalar> coords) {
    if (coords.empty()) throw Error(Error::Kind::InvalidInput, "point needs >= 1 coordinate");
    for (const ExactScalar& c : coords) {
        for (const Term& t : c.terms()) {
            if (t.coeff.imag() != 0.0) {
                throw Error(Error::Kind::InvalidInput, "point coordinates must be real nets");
            }
        }
    }
    GenPoint p;
    p.dim_ = static_cast<int>(coords.size());
    p.rep_ = ExactCoords{std::move(coords)};
    return p;
}

GenPoint GenPoint::sampled(EpsGrid grid, std::vector<std::vector<double>> coords) {
    if (coords.empty()) throw Error(Error::Kind::InvalidInput, "point needs >= 1 coordinate");
    for (const auto& c : coords) {
        if (c.size() != grid.size()) {
            throw Error(Error::Kind::Mismatch, "coordinate samples must match grid");
        }
        for (double v : c) {
            if (!std::isfinite(v)) {
                throw Error(Error::Kind::InvalidInput, "non-finite coordinate sample");
            }
        }
    }
    GenPoint p;
    p.dim_ = static_cast<int>(coords.size());
    p.rep_ = SampledCoords{std::move(grid), std::move(coords)};
    return p;
}

GenPoint GenPoint::classical(std::vector<double> x0) {
    std::vector<ExactScalar> coords;
    coords.reserve(x0.size());
    for (double v : x0) coords.push_back(ExactScalar(v));
    return exact(std::move(coords));
}

const std::vector<ExactScalar>& GenPoint::exact_coords() const {
    return std::get<ExactCoords>(rep_).c;
}

const EpsGrid& GenPoint::grid() const { return std::get<SampledCoords>(rep_).grid; }

const std::vector<std::vector<double>>& GenPoint::sampled_coords() const {
    return std::get<SampledCoords>(rep_).c;
}

std::vector<double> GenPoint::at(double eps) const {
    std::vector<double> x(dim_);
    if (is_exact()) {
        const auto& c = exact_coords();
        for (int i = 0; i < dim_; ++i) x[i] = c[i].eval(eps).real();
        return x;
    }
    const auto& s = std::get<SampledCoords>(rep_);
    // Nearest grid sample; sampled points are only defined on their grid.
    size_t best = 0;
    double bd = kInf;
    for (size_t j = 0; j < s.grid.size(); ++j) {
        double d = std::abs(std::log(s.grid.eps()[j] / eps));
        if (d < bd) {
            bd = d;
            best = j;
        }
    }
    for (int i = 0; i < dim_; ++i) x[i] = s.c[i][best];
    return x;
}

std::vector<double> GenPoint::at_index(size_t j) const {
    if (is_exact()) {
        throw Error(Error::Kind::InvalidInput, "exact points have no grid index");
    }
    std::vector<double> x(dim_);
    const auto& s = std::get<SampledCoords>(rep_);
    for (int i = 0; i < dim_; ++i) x[i] = s.c[i].at(j);
    return x;
}

GenPoint operator-(const GenPoint& a, const GenPoint& b) {
    if (a.dim() != b.dim()) throw Error(Error::Kind::Mismatch, "dimension mismatch");
    if (a.is_exact() && b.is_exact()) {
        std::vector<ExactScalar> c;
        for (int i = 0; i < a.dim(); ++i) {
            c.push_back(a.exact_coords()[i] - b.exact_coords()[i]);
        }
        return GenPoint::exact(std::move(c));
    }
    if (!a.is_exact() && !b.is_exact()) {
        if (!a.grid().same_grid(b.grid())) {
            throw Error(Error::Kind::Mismatch, "sampled points need a shared grid");
        }
        std::vector<std::vector<double>> c(a.dim());
        for (int i = 0; i < a.dim(); ++i) {
            c[i].resize(a.grid().size());
            for (size_t j = 0; j < a.grid().size(); ++j) {
                c[i][j] = a.sampled_coords()[i][j] - b.sampled_coords()[i][j];
            }
        }
        return GenPoint::sampled(a.grid(), std::move(c));
    }
    // Mixed: sample the exact side onto the sampled grid.
    const GenPoint& sam = a.is_exact() ? b : a;
    const GenPoint& exa = a.is_exact() ? a : b;
    std::vector<std::vector<double>> c(exa.dim());
    for (int i = 0; i < exa.dim(); ++i) {
        c[i].resize(sam.grid().size());
        for (size_t j = 0; j < sam.grid().size(); ++j) {
            c[i][j] = exa.exact_coords()[i].eval(sam.grid().eps()[j]).real();
        }
    }
    GenPoint es = GenPoint::sampled(sam.grid(), std::move(c));
    return a.is_exact() ? (es - b) : (a - es);
}

namespace {

/// Pointwise exponents log|x_eps| / log(eps) over the tail window.
struct TailExponents {
    double min_exp = kInf;
    double max_exp = -kInf;
    bool any_zero = false;
    ExponentFit fit_full;
    double trend = 0.0;  // deep-window slope minus shallow-window slope
};

TailExponents tail_exponents(const EpsGrid& g, const std::vector<double>& mags) {
    TailExponents out;
    std::vector<double> lm(mags.size());
    for (size_t i = 0; i < mags.size(); ++i) lm[i] = mags[i] == 0.0 ? -kInf : std::log(mags[i]);
    int tb = g.tail_begin();
    int te = static_cast<int>(g.size());
    for (int i = tb; i < te; ++i) {
        if (mags[i] == 0.0) {
            out.any_zero = true;
            continue;
        }
        double e = lm[i] / std::log(g.eps()[i]);
        out.min_exp = std::min(out.min_exp, e);
        out.max_exp = std::max(out.max_exp, e);
    }
    out.fit_full = fit_log_magnitudes(g.eps(), lm, tb, te);
    int mid = tb + (te - tb) / 2;
    if (mid - tb >= 2 && te - mid >= 2) {
        ExponentFit a = fit_log_magnitudes(g.eps(), lm, tb, mid);
        ExponentFit b = fit_log_magnitudes(g.eps(), lm, mid, te);
        if (!a.saturated_zero && !b.saturated_zero) out.trend = b.slope - a.slope;
    }
    return out;
}

std::vector<double> norm_samples(const GenPoint& p, const EpsGrid& g) {
    std::vector<double> mags(g.size());
    for (size_t j = 0; j < g.size(); ++j) {
        double acc = 0.0;
        std::vector<double> x =
            p.is_exact() ? p.at(g.eps()[j]) : p.at_index(j);
        for (double v : x) acc += v * v;
        mags[j] = std::sqrt(acc);
    }
    return mags;
}

/// Sign of an exact real net for small eps: -1, 0, +1.
int eventual_sign(const ExactScalar& x) {
    if (x.is_zero()) return 0;
    double c = x.terms().front().coeff.real();
    return c < 0 ? -1 : 1;
}

/// True iff the net value is <= bound eventually (closed comparison).
bool eventually_leq(const ExactScalar& x, double bound) {
    return eventual_sign(x - ExactScalar(bound)) <= 0;
}
bool eventually_geq(const ExactScalar& x, double bound) {
    return eventual_sign(x - ExactScalar(bound)) >= 0;
}

/// True iff the exact net converges to a finite limit; the limit is the sum
/// of (a=0, b=0) coefficients once no term grows.
std::optional<double> finite_limit(const ExactScalar& x) {
    double limit = 0.0;
    for (const Term& t : x.terms()) {
        if (t.eps_pow < 0.0 || (t.eps_pow == 0.0 && t.log_pow > 0)) return std::nullopt;
        if (t.eps_pow == 0.0 && t.log_pow == 0) limit = t.coeff.real();
    }
    return limit;
}

}  // namespace

std::variant<ExactScalar, SampledScalar> point_norm(const GenPoint& p) {
    if (p.is_exact()) {
        const auto& coords = p.exact_coords();
        bool homogeneous = true;
        double a = 0.0;
        int b = 0;
        bool seeded = false;
        for (const ExactScalar& c : coords) {
            if (c.is_zero()) continue;
            if (c.terms().size() != 1) {
                homogeneous = false;
                break;
            }
            const Term& t = c.terms().front();
            if (!seeded) {
                a = t.eps_pow;
                b = t.log_pow;
                seeded = true;
            } else if (t.eps_pow != a || t.log_pow != b) {
                homogeneous = false;
                break;
            }
        }
        if (homogeneous) {
            double ss = 0.0;
            for (const ExactScalar& c : coords) {
                if (!c.is_zero()) {
                    double cc = c.terms().front().coeff.real();
                    ss += cc * cc;
                }
            }
            if (ss == 0.0) return ExactScalar();
            return ExactScalar::monomial(Complex(std::sqrt(ss), 0.0), a, b);
        }
        EpsGrid g = EpsGrid::dyadic();
        std::vector<double> mags = norm_samples(p, g);
        std::vector<Complex> v(mags.begin(), mags.end());
        return SampledScalar(g, std::move(v));
    }
    std::vector<double> mags = norm_samples(p, p.grid());
    std::vector<Complex> v(mags.begin(), mags.end());
    return SampledScalar(p.grid(), std::move(v));
}

ScaleClass classify_scale(const GenPoint& p) {
    if (p.is_exact()) {
        double v = kInf;
        for (const ExactScalar& c : p.exact_coords()) v = std::min(v, valuation(c));
        return v >= 0.0 ? ScaleClass::Slow : ScaleClass::Fast;
    }
    const EpsGrid& g = p.grid();
    TailExponents te = tail_exponents(g, norm_samples(p, g));
    if (te.max_exp == -kInf) return ScaleClass::Slow;  // the zero net
    bool quiet = te.fit_full.max_residual <= 0.75;
    if (te.fit_full.slope >= -0.05 && quiet) return ScaleClass::Slow;
    // Bounded-but-irregular nets: every tail point already below eps^0.05.
    if (te.min_exp >= -0.05) return ScaleClass::Slow;
    // Fast needs a stable polynomial growth rate; a slope drifting toward 0
    // with depth is the log-growth signature and stays undecided.
    if (!te.any_zero && te.fit_full.slope < -0.05 && te.max_exp <= -0.05 && quiet &&
        std::abs(te.trend) <= 0.02) {
        return ScaleClass::Fast;
    }
    if (te.max_exp - te.min_exp > 0.2 || std::abs(te.trend) > 0.2) return ScaleClass::Neither;
    return ScaleClass::Inconclusive;
}

bool is_compactly_supported(const GenPoint& p, const Box& box) {
    if (box.dim() != p.dim()) throw Error(Error::Kind::Mismatch, "box dimension mismatch");
    if (p.is_exact()) {
        for (int i = 0; i < p.dim(); ++i) {
            const ExactScalar& c = p.exact_coords()[i];
            if (!finite_limit(c)) return false;
            if (!eventually_geq(c, box.lo[i]) || !eventually_leq(c, box.hi[i])) return false;
        }
        return true;
    }
    for (int i = 0; i < p.dim(); ++i) {
        for (double v : p.sampled_coords()[i]) {
            if (v < box.lo[i] || v > box.hi[i]) return false;
        }
    }
    return true;
}

bool infinitely_close(const GenPoint& a, const GenPoint& b) {
    GenPoint d = a - b;
    if (d.is_exact()) {
        for (const ExactScalar& c : d.exact_coords()) {
            if (!tends_to_zero(c)) return false;
        }
        return true;
    }
    const EpsGrid& g = d.grid();
    std::vector<double> mags = norm_samples(d, g);
    bool all_zero = true;
    for (double m : mags) {
        if (m != 0.0) all_zero = false;
    }
    if (all_zero) return true;
    TailExponents te = tail_exponents(g, mags);
    if (te.fit_full.saturated_zero) return true;
    if (te.fit_full.slope >= 0.05) return true;
    if (te.fit_full.slope <= -0.05) return false;
    // Flat trend: decide on the tail magnitude itself.
    return mags.back() < 1e-4;
}

double sharp_distance(const GenPoint& a, const GenPoint& b) {
    GenPoint d = a - b;
    if (d.is_exact()) {
        double v = kInf;
        for (const ExactScalar& c : d.exact_coords()) v = std::min(v, valuation(c));
        return v == kInf ? 0.0 : std::exp(-v);
    }
    std::vector<double> mags = norm_samples(d, d.grid());
    std::vector<double> lm(mags.size());
    for (size_t i = 0; i < mags.size(); ++i) lm[i] = mags[i] == 0.0 ? -kInf : std::log(mags[i]);
    ExponentFit f = fit_log_magnitudes(d.grid().eps(), lm, d.grid().tail_begin(),
                                       static_cast<int>(d.grid().size()));
    if (f.saturated_zero) return 0.0;
    return std::exp(-f.slope);
}

}  // namespace gfa
