#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gfa/numeric.hpp"

namespace gfa {

// ---------------------------------------------------------------------------
// Exact layer: finite sums  sum_i c_i * eps^a_i * log(1/eps)^b_i.

struct Term {
    Complex coeff;
    double eps_pow = 0.0;  // a
    int log_pow = 0;       // b

    Term() = default;
    Term(Complex c, double a, int b) : coeff(c), eps_pow(a), log_pow(b) {}
};

/// Exact model of a generalized-number representative. Invariants:
/// terms sorted by (eps_pow ascending, log_pow descending), unique (a, b)
/// pairs, no zero coefficients. The empty list is the zero net.
class ExactScalar {
public:
    ExactScalar() = default;
    explicit ExactScalar(double c) { *this = normalize({Term(Complex(c, 0.0), 0.0, 0)}); }

    /// Normalizes an arbitrary finite term list: merges equal (a, b) pairs,
    /// drops zero coefficients, sorts. Rejects non-finite input.
    static ExactScalar normalize(std::vector<Term> terms);

    /// Single-term convenience: c * eps^a * log(1/eps)^b.
    static ExactScalar monomial(Complex c, double a, int b = 0) {
        return normalize({Term(c, a, b)});
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Evaluates the represented net at a concrete eps in (0, 1).
    LogComplex eval(double eps) const;

    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator-(const ExactScalar& a);
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
    friend bool operator==(const ExactScalar& a, const ExactScalar& b);

private:
    std::vector<Term> terms_;
};

/// v(x) = sup{ a : |x_eps| <= eps^a for small eps }. Log factors are
/// sub-polynomial and do not move the valuation; +inf for the zero net.
double valuation(const ExactScalar& x);

/// |x|_e = exp(-v(x)); 0 for the zero net.
double sharp_norm(const ExactScalar& x);

/// True iff the net tends to 0: every term has eps_pow > 0, or eps_pow == 0
/// with log_pow < 0.
bool tends_to_zero(const ExactScalar& x);

// ---------------------------------------------------------------------------
// Sampled layer.

/// Strictly decreasing eps samples in (0, 1) with a fitting window on the
/// small-eps tail. The standard factory enforces geometric spacing (constant
/// ratio within 1e-12) and >= 8 tail points; explicit_points admits the
/// documented non-geometric union grids (fits are still done on geometric
/// subgrids extracted from them).
class EpsGrid {
public:
    /// eps_i = base^(-(start + i)) style geometric grid; default artifact grid
    /// is eps = 2^-i, i = 4..24, tail = last 12.
    static EpsGrid geometric(double first, double ratio, int count, int tail);
    static EpsGrid dyadic(int i_first = 4, int i_last = 24, int tail = 12);
    static EpsGrid explicit_points(std::vector<double> eps, int tail, bool require_geometric);

    const std::vector<double>& eps() const { return eps_->values; }
    size_t size() const { return eps_->values.size(); }
    int tail_begin() const { return static_cast<int>(size()) - eps_->tail; }
    int tail_size() const { return eps_->tail; }
    bool geometric_spacing() const { return eps_->geometric; }

    bool same_grid(const EpsGrid& other) const;

    /// Subgrid with every `stride`-th point starting at `offset` (used for
    /// per-parity / per-branch fits); tail scales proportionally.
    EpsGrid strided(int offset, int stride) const;

private:
    struct Data {
        std::vector<double> values;
        int tail = 0;
        bool geometric = false;
    };
    std::shared_ptr<const Data> eps_;
};

/// A net sampled on a grid; values stored as complex throughout (real input
/// embeds trivially, the Fourier side needs complex).
struct SampledScalar {
    EpsGrid grid;
    std::vector<Complex> values;

    SampledScalar() = default;
    SampledScalar(EpsGrid g, std::vector<Complex> v);

    static SampledScalar from_exact(const ExactScalar& x, const EpsGrid& g);
    static SampledScalar from_function(const EpsGrid& g,
                                       const std::function<Complex(double)>& f);
};

/// Result of the log-log slope estimate of |value| against eps over the tail
/// window. saturated_zero: all tail magnitudes below the underflow floor
/// (1e-300); slope is then the +inf sentinel.
struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    bool saturated_zero = false;
};

/// Underflow floor in natural-log units: log(1e-300).
constexpr double kSaturationLogFloor = -690.77552789821368;

/// Fit over (log eps, log-magnitude) pairs directly; -inf magnitudes are
/// clamped to the floor. This is the workhorse behind fit_exponent and all
/// sup-table fits.
ExponentFit fit_log_magnitudes(const std::vector<double>& eps,
                               const std::vector<double>& log_mags, int tail_begin,
                               int tail_end);

/// Numerical estimator of the valuation.
ExponentFit fit_exponent(const SampledScalar& s);

// ---------------------------------------------------------------------------
// Idempotents e_S and interleaving  a*e_{S^c} + b*e_S.

/// e_S: characteristic-function element. Exact scalars support only the
/// symbolic tags All/None; sampled scalars a per-grid-index mask.
class Idempotent {
public:
    enum class Tag { All, None, Mask };

    static Idempotent all() { return Idempotent(Tag::All); }
    static Idempotent none() { return Idempotent(Tag::None); }
    static Idempotent mask(std::vector<bool> m) {
        Idempotent e(Tag::Mask);
        e.mask_ = std::move(m);
        return e;
    }
    static Idempotent even_indices(size_t n) {
        std::vector<bool> m(n);
        for (size_t i = 0; i < n; ++i) m[i] = (i % 2 == 0);
        return mask(std::move(m));
    }

    Tag tag() const { return tag_; }
    const std::vector<bool>& bits() const { return mask_; }
    bool member(size_t i) const {
        switch (tag_) {
            case Tag::All: return true;
            case Tag::None: return false;
            default: return mask_.at(i);
        }
    }
    Idempotent complement() const;

private:
    explicit Idempotent(Tag t) : tag_(t) {}
    Tag tag_;
    std::vector<bool> mask_;
};

ExactScalar interleave(const ExactScalar& a, const ExactScalar& b, const Idempotent& e);
SampledScalar interleave(const SampledScalar& a, const SampledScalar& b, const Idempotent& e);

SampledScalar operator+(const SampledScalar& a, const SampledScalar& b);
SampledScalar operator*(const SampledScalar& a, const SampledScalar& b);

}  // namespace gfa
