#include "gfa/family.hpp"

#include <algorithm>

namespace gfa {

int mi_order(const MultiIndex& a) {
    int s = 0;
    for (int v : a) s += v;
    return s;
}

MultiIndex mi_zero(int dim) { return MultiIndex(dim, 0); }

namespace {

void enumerate_rec(int dim, int axis, int remaining, MultiIndex& cur,
                   std::vector<MultiIndex>& out, bool exact) {
    if (axis == dim - 1) {
        if (exact) {
            cur[axis] = remaining;
            out.push_back(cur);
        } else {
            for (int k = 0; k <= remaining; ++k) {
                cur[axis] = k;
                out.push_back(cur);
            }
        }
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        cur[axis] = k;
        enumerate_rec(dim, axis + 1, remaining - k, cur, out, exact);
    }
}

}  // namespace

std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
    std::vector<MultiIndex> out;
    MultiIndex cur(dim, 0);
    for (int total = 0; total <= max_order; ++total) {
        enumerate_rec(dim, 0, total, cur, out, true);
    }
    return out;
}

std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
    std::vector<MultiIndex> out;
    MultiIndex cur(dim, 0);
    enumerate_rec(dim, 0, order, cur, out, true);
    return out;
}

const char* to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::Dsl: return "dsl";
        case FamilyKind::Piecewise: return "piecewise";
        default: return "programmatic";
    }
}

Family::Family(int dim, FamilyKind kind, std::string name, DerivFn deriv, int max_order)
    : dim_(dim), kind_(kind), name_(std::move(name)), max_order_(max_order),
      deriv_(std::move(deriv)) {
    if (dim_ < 1) throw Error(Error::Kind::InvalidInput, "family dimension must be >= 1");
    if (!deriv_) throw Error(Error::Kind::InvalidInput, "family needs a derivative rule");
}

LogComplex Family::deriv(const MultiIndex& alpha, double eps, std::span<const double> x) const {
    if (static_cast<int>(alpha.size()) != dim_ || static_cast<int>(x.size()) != dim_) {
        throw Error(Error::Kind::Mismatch, "multi-index/point dimension mismatch");
    }
    if (mi_order(alpha) > max_order_) {
        throw Error(Error::Kind::Budget,
                    "derivative order " + std::to_string(mi_order(alpha)) +
                        " beyond family capability " + std::to_string(max_order_));
    }
    return deriv_(alpha, eps, x);
}

LogComplex Family::deriv_at(const MultiIndex& alpha, double eps, int anchor,
                            double offset) const {
    if (anchored_ && anchor >= 0) {
        if (mi_order(alpha) > max_order_) {
            throw Error(Error::Kind::Budget, "derivative order beyond family capability");
        }
        return anchored_(alpha, eps, anchor, offset);
    }
    double x = anchor_position(anchor) + offset;
    return deriv(alpha, eps, std::span<const double>(&x, 1));
}

std::optional<double> Family::support_radius(double eps) const {
    if (!support_) return std::nullopt;
    double r = support_(eps);
    if (!std::isfinite(r)) return std::nullopt;  // unbounded at this eps
    return r;
}

std::vector<FocusPatch> Family::focus_patches(double eps) const {
    if (!focus_) return {};
    return focus_(eps);
}

// ---------------------------------------------------------------------------

DerivTable::DerivTable(ExprPtr root, int dim, int max_order)
    : root_(std::move(root)), dim_(dim), max_order_(max_order) {}

ExprPtr DerivTable::get(const MultiIndex& alpha) const {
    if (static_cast<int>(alpha.size()) != dim_) {
        throw Error(Error::Kind::Mismatch, "multi-index dimension mismatch");
    }
    if (mi_order(alpha) > max_order_) {
        throw Error(Error::Kind::Budget,
                    "symbolic derivative order " + std::to_string(mi_order(alpha)) +
                        " beyond the configured cap " + std::to_string(max_order_));
    }
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(alpha);
    if (it != memo_.end()) return it->second;
    // Build by lowering the first nonzero axis; recursion depth = |alpha|.
    std::vector<std::pair<MultiIndex, int>> pending;
    MultiIndex cur = alpha;
    while (memo_.find(cur) == memo_.end()) {
        int axis = -1;
        for (int i = 0; i < dim_; ++i) {
            if (cur[i] > 0) {
                axis = i;
                break;
            }
        }
        if (axis < 0) {
            memo_.emplace(cur, root_);
            break;
        }
        pending.emplace_back(cur, axis);
        --cur[axis];
    }
    for (auto pit = pending.rbegin(); pit != pending.rend(); ++pit) {
        MultiIndex lower = pit->first;
        --lower[pit->second];
        memo_.emplace(pit->first, differentiate(memo_.at(lower), pit->second));
    }
    return memo_.at(alpha);
}

namespace {

/// Flattens a multiplication tree into factors.
void collect_factors(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (e->kind == Expr::Kind::Mul) {
        collect_factors(e->lhs, out);
        collect_factors(e->rhs, out);
    } else {
        out.push_back(e);
    }
}

/// Matches sin/cos(c * x1 / eps) shapes; returns the frequency scale c.
bool match_oscillation_arg(const ExprPtr& arg, double& scale) {
    // x1 / eps
    auto is_x1 = [](const ExprPtr& e) { return e->kind == Expr::Kind::Var && e->var == 0; };
    auto is_eps = [](const ExprPtr& e) { return e->kind == Expr::Kind::Var && e->var == -1; };
    if (arg->kind == Expr::Kind::Div && is_eps(arg->rhs)) {
        const ExprPtr& nume = arg->lhs;
        if (is_x1(nume)) {
            scale = 1.0;
            return true;
        }
        if (nume->kind == Expr::Kind::Mul) {
            if (nume->lhs->kind == Expr::Kind::Number && is_x1(nume->rhs)) {
                scale = nume->lhs->number;
                return true;
            }
            if (nume->rhs->kind == Expr::Kind::Number && is_x1(nume->lhs)) {
                scale = nume->rhs->number;
                return true;
            }
        }
    }
    if (arg->kind == Expr::Kind::Mul && arg->lhs->kind == Expr::Kind::Number &&
        arg->rhs->kind == Expr::Kind::Div && is_x1(arg->rhs->lhs) && is_eps(arg->rhs->rhs)) {
        scale = arg->lhs->number;
        return true;
    }
    return false;
}

std::optional<OscillatoryForm> detect_oscillation(const ExprPtr& e, int dim) {
    if (dim != 1) return std::nullopt;
    std::vector<ExprPtr> factors;
    collect_factors(e, factors);
    int osc_index = -1;
    OscillatoryForm form;
    for (size_t i = 0; i < factors.size(); ++i) {
        const ExprPtr& f = factors[i];
        if (f->kind != Expr::Kind::Call) continue;
        if (f->fn != Builtin::Sin && f->fn != Builtin::Cos) continue;
        double scale = 0.0;
        if (!match_oscillation_arg(f->arg, scale)) continue;
        if (osc_index >= 0) return std::nullopt;  // more than one oscillatory factor
        osc_index = static_cast<int>(i);
        form.osc = f->fn == Builtin::Sin ? OscillatoryForm::Osc::Sin : OscillatoryForm::Osc::Cos;
        form.freq_scale = scale;
    }
    if (osc_index < 0) return std::nullopt;
    ExprPtr amp = num(1.0);
    for (size_t i = 0; i < factors.size(); ++i) {
        if (static_cast<int>(i) == osc_index) continue;
        if (uses_eps(*factors[i])) return std::nullopt;  // amplitude must be eps-free
        amp = mul(amp, factors[i]);
    }
    form.amplitude = amp;
    return form;
}

}  // namespace

Family family_from_expr(const ExprPtr& e, int dim, int max_order, const std::string& name) {
    if (dim < 1) throw Error(Error::Kind::InvalidInput, "dim must be >= 1");
    int maxvar = max_var_index(*e);
    if (maxvar >= dim) {
        throw Error(Error::Kind::InvalidInput,
                    "expression uses x" + std::to_string(maxvar + 1) + " but dim = " +
                        std::to_string(dim));
    }
    auto table = std::make_shared<DerivTable>(e, dim, max_order);
    Family fam(
        dim, FamilyKind::Dsl, name,
        [table](const MultiIndex& alpha, double eps, std::span<const double> x) {
            return eval(table->get(alpha), eps, x);
        },
        max_order);
    if (auto osc = detect_oscillation(e, dim)) fam.set_oscillation(*osc);
    return fam;
}

// ---------------------------------------------------------------------------
// Pointwise combinations.

namespace {

double multi_binomial(const MultiIndex& alpha, const MultiIndex& beta) {
    auto choose = [](int n, int k) {
        double c = 1.0;
        for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
        return c;
    };
    double c = 1.0;
    for (size_t i = 0; i < alpha.size(); ++i) c *= choose(alpha[i], beta[i]);
    return c;
}

void for_each_sub_index(const MultiIndex& alpha, const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex beta(alpha.size(), 0);
    while (true) {
        fn(beta);
        size_t i = 0;
        while (i < alpha.size()) {
            if (beta[i] < alpha[i]) {
                ++beta[i];
                break;
            }
            beta[i] = 0;
            ++i;
        }
        if (i == alpha.size()) break;
    }
}

}  // namespace

Family product_family(const Family& u, const Family& v, const std::string& name) {
    if (u.dim() != v.dim()) throw Error(Error::Kind::Mismatch, "product dimension mismatch");
    auto uc = std::make_shared<Family>(u);
    auto vc = std::make_shared<Family>(v);
    int max_order = std::min(u.max_order(), v.max_order());
    Family fam(
        u.dim(), FamilyKind::Programmatic, name,
        [uc, vc](const MultiIndex& alpha, double eps, std::span<const double> x) {
            LogComplex acc = LogComplex::zero();
            for_each_sub_index(alpha, [&](const MultiIndex& beta) {
                MultiIndex rest(alpha.size());
                for (size_t i = 0; i < alpha.size(); ++i) rest[i] = alpha[i] - beta[i];
                LogComplex term = uc->deriv(beta, eps, x) * vc->deriv(rest, eps, x);
                acc = acc + LogComplex::from_real(multi_binomial(alpha, beta)) * term;
            });
            return acc;
        },
        max_order);
    // Product support is the smaller of the two supports.
    if (u.support_radius(0.5) || v.support_radius(0.5)) {
        fam.set_support_radius([uc, vc](double eps) {
            auto ru = uc->support_radius(eps);
            auto rv = vc->support_radius(eps);
            if (ru && rv) return std::min(*ru, *rv);
            return ru ? *ru : *rv;
        });
    }
    return fam;
}

Family sum_family(const Family& u, const Family& v, const std::string& name) {
    if (u.dim() != v.dim()) throw Error(Error::Kind::Mismatch, "sum dimension mismatch");
    auto uc = std::make_shared<Family>(u);
    auto vc = std::make_shared<Family>(v);
    Family fam(
        u.dim(), FamilyKind::Programmatic, name,
        [uc, vc](const MultiIndex& alpha, double eps, std::span<const double> x) {
            return uc->deriv(alpha, eps, x) + vc->deriv(alpha, eps, x);
        },
        std::min(u.max_order(), v.max_order()));
    if (u.support_radius(0.5) && v.support_radius(0.5)) {
        fam.set_support_radius([uc, vc](double eps) {
            return std::max(*uc->support_radius(eps), *vc->support_radius(eps));
        });
    }
    return fam;
}

Family scale_family(const Family& u, const ExactScalar& c, const std::string& name) {
    auto uc = std::make_shared<Family>(u);
    auto cc = std::make_shared<ExactScalar>(c);
    Family fam(
        u.dim(), u.kind(), name,
        [uc, cc](const MultiIndex& alpha, double eps, std::span<const double> x) {
            return cc->eval(eps) * uc->deriv(alpha, eps, x);
        },
        u.max_order());
    if (u.support_radius(0.5)) {
        fam.set_support_radius([uc](double eps) { return *uc->support_radius(eps); });
    }
    if (u.oscillation()) {
        OscillatoryForm form = *u.oscillation();
        form.prefactor = form.prefactor * c;
        fam.set_oscillation(std::move(form));
    }
    return fam;
}

}  // namespace gfa
