#include "gfa/bump.hpp"

#include <algorithm>
#include <cmath>

namespace gfa {

namespace {

using Wide = __int128;

std::vector<Wide> poly_mul(const std::vector<Wide>& p, const std::vector<Wide>& q) {
    std::vector<Wide> r(p.size() + q.size() - 1, 0);
    for (size_t i = 0; i < p.size(); ++i) {
        for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    }
    return r;
}

std::vector<Wide> poly_add(std::vector<Wide> p, const std::vector<Wide>& q) {
    if (q.size() > p.size()) p.resize(q.size(), 0);
    for (size_t i = 0; i < q.size(); ++i) p[i] += q[i];
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    return p;
}

std::vector<Wide> poly_deriv(const std::vector<Wide>& p) {
    if (p.size() <= 1) return {0};
    std::vector<Wide> r(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) r[i - 1] = static_cast<Wide>(i) * p[i];
    return r;
}

double horner(const std::vector<double>& coeffs, double t) {
    double acc = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
    return acc;
}

}  // namespace

BumpKernel::BumpKernel() {
    // (1 - t^2)^2 and the recurrence in exact 128-bit integers.
    const std::vector<Wide> sq = {1, 0, -2, 0, 1};
    std::vector<std::vector<Wide>> polys;
    polys.push_back({1});
    for (int k = 0; k < kMaxOrder; ++k) {
        std::vector<Wide> bracket = {0, 4 * static_cast<Wide>(k) - 2, 0,
                                     -4 * static_cast<Wide>(k)};
        std::vector<Wide> next =
            poly_add(poly_mul(poly_deriv(polys[k]), sq), poly_mul(polys[k], bracket));
        polys.push_back(std::move(next));
    }
    polys_.resize(polys.size());
    for (size_t k = 0; k < polys.size(); ++k) {
        polys_[k].resize(polys[k].size());
        for (size_t i = 0; i < polys[k].size(); ++i) {
            polys_[k][i] = static_cast<double>(polys[k][i]);
        }
    }

    // Moments by adaptive quadrature; the integrand is smooth and flat at the
    // endpoints, so this converges fast. Odd moments are exactly zero.
    moments_.resize(2 * kMaxOrder + 1);
    for (int j = 0; j <= 2 * kMaxOrder; ++j) {
        if (j % 2 == 1) {
            moments_[j] = 0.0;
            continue;
        }
        auto f = [this, j](double s) -> Complex {
            return {std::pow(s, j) * deriv_log(0, s).real(), 0.0};
        };
        moments_[j] = adaptive_simpson(f, -1.0, 1.0, 1e-13).real();
    }

    sup_abs_.resize(kMaxOrder + 1);
    for (int k = 0; k <= kMaxOrder; ++k) {
        double best = 0.0;
        const int n = 20001;
        for (int i = 0; i < n; ++i) {
            double t = -1.0 + 2.0 * i / (n - 1);
            best = std::max(best, std::abs(deriv(k, t)));
        }
        sup_abs_[k] = best;
    }

    // Cumulative partial-moment tables, marched once with a 5-point Simpson
    // per subinterval; interpolation happens in partial_moment.
    const int nodes = 4096;
    partials_.assign(moments_.size(), std::vector<double>(nodes + 1, 0.0));
    for (size_t j = 0; j < partials_.size(); ++j) {
        auto f = [this, j](double t) { return std::pow(t, static_cast<int>(j)) * deriv(0, t); };
        double h = 2.0 / nodes;
        for (int i = 0; i < nodes; ++i) {
            double a = -1.0 + i * h;
            double piece = (h / 12.0) * (f(a) + 4.0 * f(a + 0.25 * h) + 2.0 * f(a + 0.5 * h) +
                                         4.0 * f(a + 0.75 * h) + f(a + h));
            partials_[j][i + 1] = partials_[j][i] + piece;
        }
    }
}

const BumpKernel& BumpKernel::instance() {
    static const BumpKernel kernel;
    return kernel;
}

LogComplex BumpKernel::deriv_log(int k, double t) const {
    if (k < 0 || k > kMaxOrder) {
        throw Error(Error::Kind::InvalidInput, "bump derivative order out of range");
    }
    if (!(std::abs(t) < 1.0)) return LogComplex::zero();
    double om = (1.0 - t) * (1.0 + t);  // 1 - t^2 without cancellation near |t|=1
    double p = horner(polys_[k], t);
    double lmag = -1.0 / om - 2.0 * k * std::log(om);
    if (p == 0.0) return LogComplex::zero();
    return LogComplex::from_log_real(lmag + std::log(std::abs(p)), p < 0 ? -1.0 : 1.0);
}

double BumpKernel::deriv_at_zero(int k) const {
    if (k < 0 || k > kMaxOrder) {
        throw Error(Error::Kind::InvalidInput, "bump derivative order out of range");
    }
    return polys_[k][0] * std::exp(-1.0);
}

double BumpKernel::moment(int j) const {
    if (j < 0 || j >= static_cast<int>(moments_.size())) {
        throw Error(Error::Kind::InvalidInput, "bump moment order out of range");
    }
    return moments_[j];
}

double BumpKernel::partial_moment(int j, double tau) const {
    if (j < 0 || j >= static_cast<int>(moments_.size())) {
        throw Error(Error::Kind::InvalidInput, "bump moment order out of range");
    }
    if (tau <= -1.0) return 0.0;
    if (tau >= 1.0) return moment(j);
    // Cumulative table + Hermite cubic with exact endpoint slopes s^j phi(s).
    const std::vector<double>& table = partials_[j];
    int n = static_cast<int>(table.size()) - 1;
    double pos = (tau + 1.0) * 0.5 * n;
    int i = std::min(static_cast<int>(pos), n - 1);
    double h = 2.0 / n;
    double t0 = -1.0 + i * h;
    double s = (tau - t0) / h;
    auto f = [this, j](double t) { return std::pow(t, j) * deriv(0, t); };
    double p0 = table[i], p1 = table[i + 1];
    double m0 = f(t0) * h, m1 = f(t0 + h) * h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1;
}

double BumpKernel::sup_abs_deriv(int k) const {
    if (k < 0 || k > kMaxOrder) {
        throw Error(Error::Kind::InvalidInput, "bump derivative order out of range");
    }
    return sup_abs_[k];
}

const std::vector<double>& BumpKernel::poly(int k) const { return polys_[k]; }

// ---------------------------------------------------------------------------

PlateauCutoff::PlateauCutoff() {
    // chi'(s) on s in (1, 2) is -phi(2s-3)/Z with Z = M_0 / 2.
    norm_ = BumpKernel::instance().moment(0) / 2.0;
}

const PlateauCutoff& PlateauCutoff::instance() {
    static const PlateauCutoff cutoff;
    return cutoff;
}

double PlateauCutoff::value(double t) const {
    double s = std::abs(t);
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    // Remaining mass of the profile beyond s.
    double acc = adaptive_simpson(
                     [](double u) -> Complex {
                         return {BumpKernel::instance().deriv_log(0, 2.0 * u - 3.0).real(), 0.0};
                     },
                     s, 2.0, 1e-12)
                     .real();
    return acc / norm_;
}

double PlateauCutoff::deriv(int k, double t) const {
    if (k == 0) return value(t);
    double s = std::abs(t);
    if (s <= 1.0 || s >= 2.0) return 0.0;
    // d/ds chi(s) = -phi(2s-3)/Z; further derivatives scale by 2 per order.
    double inner = BumpKernel::instance().deriv(k - 1, 2.0 * s - 3.0);
    double v = -inner * std::pow(2.0, k - 1) / norm_;
    if (t < 0.0 && k % 2 == 1) v = -v;  // chi is even
    return v;
}

}  // namespace gfa
