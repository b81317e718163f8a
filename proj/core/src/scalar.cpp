#include "gfa/scalar.hpp"

#include <algorithm>
#include <cmath>

namespace gfa {

namespace {

bool term_order(const Term& u, const Term& v) {
    if (u.eps_pow != v.eps_pow) return u.eps_pow < v.eps_pow;
    return u.log_pow > v.log_pow;
}

}  // namespace

ExactScalar ExactScalar::normalize(std::vector<Term> terms) {
    for (const Term& t : terms) {
        if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()) ||
            !std::isfinite(t.eps_pow)) {
            throw Error(Error::Kind::InvalidInput, "non-finite term in exact scalar");
        }
    }
    std::sort(terms.begin(), terms.end(), term_order);
    std::vector<Term> merged;
    for (const Term& t : terms) {
        if (!merged.empty() && merged.back().eps_pow == t.eps_pow &&
            merged.back().log_pow == t.log_pow) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == Complex(0.0, 0.0); });
    ExactScalar out;
    out.terms_ = std::move(merged);
    return out;
}

LogComplex ExactScalar::eval(double eps) const {
    if (eps <= 0.0 || eps >= 1.0) {
        throw Error(Error::Kind::InvalidInput, "eps must lie in (0, 1)");
    }
    double le = std::log(eps);
    double ll = std::log(-le);  // log log(1/eps)
    LogComplex acc = LogComplex::zero();
    for (const Term& t : terms_) {
        LogComplex v = LogComplex::from_complex(t.coeff);
        acc = acc + LogComplex{v.log_mag + t.eps_pow * le + t.log_pow * ll, v.dir};
    }
    return acc;
}

ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    std::vector<Term> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return ExactScalar::normalize(std::move(all));
}

ExactScalar operator-(const ExactScalar& a) {
    std::vector<Term> neg = a.terms_;
    for (Term& t : neg) t.coeff = -t.coeff;
    ExactScalar out;
    out.terms_ = std::move(neg);  // negation preserves normalization
    return out;
}

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    std::vector<Term> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& u : a.terms_) {
        for (const Term& v : b.terms_) {
            prod.emplace_back(u.coeff * v.coeff, u.eps_pow + v.eps_pow, u.log_pow + v.log_pow);
        }
    }
    return ExactScalar::normalize(std::move(prod));
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].coeff != b.terms_[i].coeff ||
            a.terms_[i].eps_pow != b.terms_[i].eps_pow ||
            a.terms_[i].log_pow != b.terms_[i].log_pow) {
            return false;
        }
    }
    return true;
}

double valuation(const ExactScalar& x) {
    if (x.is_zero()) return kInf;
    // Normalization puts the smallest eps power first; distinct log powers at
    // the leading eps power cannot cancel.
    return x.terms().front().eps_pow;
}

double sharp_norm(const ExactScalar& x) {
    if (x.is_zero()) return 0.0;
    return std::exp(-valuation(x));
}

bool tends_to_zero(const ExactScalar& x) {
    for (const Term& t : x.terms()) {
        if (t.eps_pow > 0.0) continue;
        if (t.eps_pow == 0.0 && t.log_pow < 0) continue;
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

EpsGrid EpsGrid::geometric(double first, double ratio, int count, int tail) {
    if (!(first > 0.0 && first < 1.0) || !(ratio > 0.0 && ratio < 1.0) || count < 2) {
        throw Error(Error::Kind::InvalidInput, "bad geometric grid parameters");
    }
    std::vector<double> eps(count);
    double v = first;
    for (int i = 0; i < count; ++i) {
        eps[i] = v;
        v *= ratio;
    }
    return explicit_points(std::move(eps), tail, true);
}

EpsGrid EpsGrid::dyadic(int i_first, int i_last, int tail) {
    std::vector<double> eps;
    for (int i = i_first; i <= i_last; ++i) eps.push_back(std::exp2(-i));
    return explicit_points(std::move(eps), tail, true);
}

EpsGrid EpsGrid::explicit_points(std::vector<double> eps, int tail, bool require_geometric) {
    if (eps.size() < 2) throw Error(Error::Kind::InvalidInput, "grid needs >= 2 points");
    for (size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && eps[i] < 1.0)) {
            throw Error(Error::Kind::InvalidInput, "grid eps values must lie in (0, 1)");
        }
        if (i > 0 && !(eps[i] < eps[i - 1])) {
            throw Error(Error::Kind::InvalidInput, "grid must be strictly decreasing");
        }
    }
    if (tail < 2 || tail > static_cast<int>(eps.size())) {
        throw Error(Error::Kind::InvalidInput, "bad tail window");
    }
    bool geom = true;
    double r0 = eps[1] / eps[0];
    for (size_t i = 1; i + 1 < eps.size(); ++i) {
        if (std::abs(eps[i + 1] / eps[i] - r0) > 1e-12) {
            geom = false;
            break;
        }
    }
    if (require_geometric) {
        if (!geom) throw Error(Error::Kind::InvalidInput, "grid spacing is not geometric");
        if (tail < 8) throw Error(Error::Kind::InvalidInput, "tail window needs >= 8 points");
    }
    auto data = std::make_shared<Data>();
    data->values = std::move(eps);
    data->tail = tail;
    data->geometric = geom;
    EpsGrid g;
    g.eps_ = std::move(data);
    return g;
}

bool EpsGrid::same_grid(const EpsGrid& other) const {
    if (eps_ == other.eps_) return true;
    return eps_->values == other.eps_->values && eps_->tail == other.eps_->tail;
}

EpsGrid EpsGrid::strided(int offset, int stride) const {
    if (stride < 1 || offset < 0) throw Error(Error::Kind::InvalidInput, "bad stride");
    std::vector<double> sub;
    for (size_t i = offset; i < size(); i += stride) sub.push_back(eps()[i]);
    int tail = std::max(2, std::min<int>(static_cast<int>(sub.size()),
                                         (tail_size() + stride - 1) / stride));
    return explicit_points(std::move(sub), tail, false);
}

SampledScalar::SampledScalar(EpsGrid g, std::vector<Complex> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw Error(Error::Kind::InvalidInput, "sample count must match grid");
    }
    for (const Complex& z : values) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(Error::Kind::InvalidInput, "non-finite sample value");
        }
    }
}

SampledScalar SampledScalar::from_exact(const ExactScalar& x, const EpsGrid& g) {
    std::vector<Complex> v(g.size());
    for (size_t i = 0; i < g.size(); ++i) v[i] = x.eval(g.eps()[i]).to_complex();
    return SampledScalar(g, std::move(v));
}

SampledScalar SampledScalar::from_function(const EpsGrid& g,
                                           const std::function<Complex(double)>& f) {
    std::vector<Complex> v(g.size());
    for (size_t i = 0; i < g.size(); ++i) v[i] = f(g.eps()[i]);
    return SampledScalar(g, std::move(v));
}

ExponentFit fit_log_magnitudes(const std::vector<double>& eps,
                               const std::vector<double>& log_mags, int tail_begin,
                               int tail_end) {
    if (tail_end <= tail_begin || tail_end > static_cast<int>(eps.size()) ||
        eps.size() != log_mags.size()) {
        throw Error(Error::Kind::InvalidInput, "bad fit window");
    }
    if (tail_end - tail_begin < 2) {
        throw Error(Error::Kind::InvalidInput, "fit window needs >= 2 points");
    }
    ExponentFit out;
    bool all_saturated = true;
    for (int i = tail_begin; i < tail_end; ++i) {
        if (log_mags[i] > kSaturationLogFloor) all_saturated = false;
    }
    if (all_saturated) {
        out.saturated_zero = true;
        out.slope = kInf;
        return out;
    }
    std::vector<double> x, y;
    for (int i = tail_begin; i < tail_end; ++i) {
        x.push_back(std::log(eps[i]));
        y.push_back(std::max(log_mags[i], kSaturationLogFloor));
    }
    LineFit fit = fit_line(x, y);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.max_residual = fit.max_residual;
    return out;
}

ExponentFit fit_exponent(const SampledScalar& s) {
    std::vector<double> lm(s.values.size());
    for (size_t i = 0; i < s.values.size(); ++i) lm[i] = safe_log_abs(s.values[i]);
    return fit_log_magnitudes(s.grid.eps(), lm, s.grid.tail_begin(),
                              static_cast<int>(s.grid.size()));
}

Idempotent Idempotent::complement() const {
    switch (tag_) {
        case Tag::All: return none();
        case Tag::None: return all();
        default: {
            std::vector<bool> inv(mask_.size());
            for (size_t i = 0; i < mask_.size(); ++i) inv[i] = !mask_[i];
            return mask(std::move(inv));
        }
    }
}

ExactScalar interleave(const ExactScalar& a, const ExactScalar& b, const Idempotent& e) {
    switch (e.tag()) {
        case Idempotent::Tag::All: return b;
        case Idempotent::Tag::None: return a;
        default:
            throw Error(Error::Kind::InvalidInput,
                        "exact interleave supports only the all/none idempotents");
    }
}

SampledScalar interleave(const SampledScalar& a, const SampledScalar& b, const Idempotent& e) {
    if (!a.grid.same_grid(b.grid)) {
        throw Error(Error::Kind::Mismatch, "interleave requires a shared grid");
    }
    if (e.tag() == Idempotent::Tag::Mask && e.bits().size() != a.grid.size()) {
        throw Error(Error::Kind::Mismatch, "idempotent mask length must match grid");
    }
    std::vector<Complex> v(a.values.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = e.member(i) ? b.values[i] : a.values[i];
    return SampledScalar(a.grid, std::move(v));
}

SampledScalar operator+(const SampledScalar& a, const SampledScalar& b) {
    if (!a.grid.same_grid(b.grid)) throw Error(Error::Kind::Mismatch, "grid mismatch in +");
    std::vector<Complex> v(a.values.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] + b.values[i];
    return SampledScalar(a.grid, std::move(v));
}

SampledScalar operator*(const SampledScalar& a, const SampledScalar& b) {
    if (!a.grid.same_grid(b.grid)) throw Error(Error::Kind::Mismatch, "grid mismatch in *");
    std::vector<Complex> v(a.values.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] * b.values[i];
    return SampledScalar(a.grid, std::move(v));
}

}  // namespace gfa
