#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfa/expr.hpp"
#include "gfa/scalar.hpp"

namespace gfa {

/// Derivative multi-index; size d, entry i = order along x_{i+1}.
using MultiIndex = std::vector<int>;

int mi_order(const MultiIndex& a);
MultiIndex mi_zero(int dim);
/// All multi-indices of R^dim with |alpha| <= max_order, graded order.
std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order);
/// All multi-indices with |alpha| == order.
std::vector<MultiIndex> multi_indices_of_order(int dim, int order);

enum class FamilyKind { Dsl, Piecewise, Programmatic };

const char* to_string(FamilyKind k);

/// Oscillatory structure u(x) = A(x) * osc(freq_scale * x / eps) for 1-d
/// families with eps-free amplitude A; lets the Fourier side integrate by
/// parts instead of chasing cancellation it cannot resolve.
struct OscillatoryForm {
    enum class Osc { Sin, Cos, Cis };
    Osc osc = Osc::Sin;
    double freq_scale = 1.0;
    ExprPtr amplitude;
    /// Exact eps-dependent prefactor in front of A(x)*osc(...).
    ExactScalar prefactor = ExactScalar(1.0);
};

/// A patch the sup sampler must resolve explicitly (peaks thinner than any
/// uniform grid). Positions are anchor-relative: anchor < 0 means absolute
/// coordinates, otherwise offsets against Family::anchors()[anchor]. Offsets
/// stay representable in double even when the absolute position is not.
struct FocusPatch {
    int anchor = -1;
    double center = 0.0;
    double halfwidth = 0.0;
};

/// An eps-parametrized family of smooth functions with value and derivative
/// evaluation rules. value(eps, x) == deriv(0, eps, x) by construction.
/// All evaluation returns LogComplex; magnitudes like eps^{-m^2} never leave
/// log space.
class Family {
public:
    using DerivFn =
        std::function<LogComplex(const MultiIndex&, double, std::span<const double>)>;
    /// Anchored evaluation at position anchors[anchor] + offset (1-d).
    using AnchoredFn = std::function<LogComplex(const MultiIndex&, double, int, double)>;

    Family() = default;
    Family(int dim, FamilyKind kind, std::string name, DerivFn deriv, int max_order = 16);

    int dim() const { return dim_; }
    FamilyKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    int max_order() const { return max_order_; }

    LogComplex deriv(const MultiIndex& alpha, double eps, std::span<const double> x) const;
    LogComplex value(double eps, std::span<const double> x) const {
        return deriv(mi_zero(dim_), eps, x);
    }
    /// 1-d anchored evaluation; falls back to absolute coordinates when the
    /// family carries no anchored rule or anchor < 0.
    LogComplex deriv_at(const MultiIndex& alpha, double eps, int anchor, double offset) const;

    const std::vector<double>& anchors() const { return anchors_; }
    double anchor_position(int anchor) const {
        return anchor < 0 ? 0.0 : anchors_.at(anchor);
    }

    /// Radius outside which the family vanishes, if known.
    std::optional<double> support_radius(double eps) const;
    std::vector<FocusPatch> focus_patches(double eps) const;
    const std::optional<OscillatoryForm>& oscillation() const { return oscillation_; }

    Family& set_support_radius(std::function<double(double)> fn) {
        support_ = std::move(fn);
        return *this;
    }
    Family& set_focus(std::function<std::vector<FocusPatch>(double)> fn) {
        focus_ = std::move(fn);
        return *this;
    }
    Family& set_anchors(std::vector<double> a) {
        anchors_ = std::move(a);
        return *this;
    }
    Family& set_anchored_rule(AnchoredFn fn) {
        anchored_ = std::move(fn);
        return *this;
    }
    Family& set_oscillation(OscillatoryForm form) {
        oscillation_ = std::move(form);
        return *this;
    }
    Family& set_name(std::string n) {
        name_ = std::move(n);
        return *this;
    }

private:
    int dim_ = 1;
    FamilyKind kind_ = FamilyKind::Programmatic;
    std::string name_;
    int max_order_ = 16;
    DerivFn deriv_;
    AnchoredFn anchored_;
    std::vector<double> anchors_;
    std::function<double(double)> support_;
    std::function<std::vector<FocusPatch>(double)> focus_;
    std::optional<OscillatoryForm> oscillation_;
};

/// Family backed by a parsed expression; derivatives are symbolic, memoized
/// per multi-index up to max_order (requesting beyond is an error, never a
/// silent finite difference). Detects the A(x)*sin(cx/eps) shape and records
/// it as the family's oscillatory form.
Family family_from_expr(const ExprPtr& e, int dim, int max_order = 16,
                        const std::string& name = "dsl-family");

/// The memoized symbolic derivative table behind a DSL family.
class DerivTable {
public:
    DerivTable(ExprPtr root, int dim, int max_order);
    ExprPtr get(const MultiIndex& alpha) const;
    int max_order() const { return max_order_; }

private:
    ExprPtr root_;
    int dim_;
    int max_order_;
    mutable std::mutex mu_;
    mutable std::map<MultiIndex, ExprPtr> memo_;
};

/// Pointwise product u*v with Leibniz derivatives.
Family product_family(const Family& u, const Family& v, const std::string& name);

/// Sum u + v.
Family sum_family(const Family& u, const Family& v, const std::string& name);

/// u scaled by an exact net c(eps).
Family scale_family(const Family& u, const ExactScalar& c, const std::string& name);

}  // namespace gfa
