#include "gfa/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "gfa/bump.hpp"
#include "gfa/parallel.hpp"

namespace gfa {

namespace {

std::string alpha_desc(const MultiIndex& a) {
    if (a.size() == 1) return std::to_string(a[0]);
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(a[i]);
    }
    return s + ")";
}

double ln_eps(double eps) { return std::log(eps); }

}  // namespace

PointNet PointNet::constant(double x0, const std::string& name) {
    PointNet p;
    p.name = name;
    p.at = [x0](double) { return std::pair<int, double>(-1, x0); };
    p.classical_coords = {x0};
    return p;
}

PointNet PointNet::classical(std::vector<double> x0, const std::string& name) {
    if (x0.empty()) throw Error(Error::Kind::InvalidInput, "point needs coordinates");
    PointNet p = constant(x0[0], name);
    p.classical_coords = std::move(x0);
    return p;
}

PointNet PointNet::anchored(int anchor, std::function<double(double)> offset,
                            const std::string& name) {
    PointNet p;
    p.name = name;
    p.at = [anchor, offset = std::move(offset)](double eps) {
        return std::pair<int, double>(anchor, offset(eps));
    };
    return p;
}

CellFit fit_cell(const EpsGrid& grid, std::vector<double> logmags, const TestParams& p,
                 int direction) {
    CellFit cell;
    int tb = grid.tail_begin();
    int te = static_cast<int>(grid.size());
    cell.fit = fit_log_magnitudes(grid.eps(), logmags, tb, te);
    int mid = tb + (te - tb) / 2;
    if (!cell.fit.saturated_zero && mid - tb >= 2 && te - mid >= 2) {
        ExponentFit shallow = fit_log_magnitudes(grid.eps(), logmags, tb, mid);
        ExponentFit deep = fit_log_magnitudes(grid.eps(), logmags, mid, te);
        if (!shallow.saturated_zero && !deep.saturated_zero) {
            cell.window_trend = deep.slope - shallow.slope;
            if (cell.fit.max_residual > p.resid_tol) {
                if (direction > 0 && cell.window_trend < -p.growth_tol) cell.diverges = true;
                if (direction < 0 && cell.window_trend > p.growth_tol) cell.diverges = true;
            }
        }
    }
    cell.logmags = std::move(logmags);
    return cell;
}

namespace {

/// Sup log-magnitudes across the grid for one (alpha, region) cell;
/// region geometry is resolved per eps by the builder.
std::vector<double> region_logmags(const Family& fam, const MultiIndex& alpha,
                                   const std::function<RegionSpec(double)>& region_at,
                                   const EpsGrid& grid, const SampleParams& sp,
                                   bool minimize = false, std::vector<bool>* zero_hit = nullptr) {
    std::vector<double> lm(grid.size());
    std::vector<bool> zeros(grid.size(), false);
    parallel_for(grid.size(), [&](size_t i) {
        double eps = grid.eps()[i];
        ExtremumResult r = extremum_on_region(fam, alpha, eps, region_at(eps), sp, minimize);
        lm[i] = r.log_mag;
        zeros[i] = r.exact_zero_hit;
    });
    if (zero_hit) *zero_hit = zeros;
    return lm;
}

void push_sweep(ClassificationReport& rep, const EpsGrid& grid, const std::string& region,
                const std::string& alpha, double m_or_k, const CellFit& cell) {
    for (size_t i = 0; i < grid.size(); ++i) {
        rep.sweep.push_back(SweepRow{grid.eps()[i], region, alpha, m_or_k, cell.logmags[i],
                                     cell.fit.slope, cell.fit.max_residual});
    }
}

/// Shared ball-sup table: cells[(alpha_idx, m-1)] over the grid.
struct BallTable {
    std::vector<MultiIndex> alphas;
    std::vector<std::vector<CellFit>> cells;  // [alpha][m-1]
};

BallTable compute_ball_table(const Family& fam, const TestParams& p, const EpsGrid& grid) {
    BallTable t;
    t.alphas = multi_indices_up_to(fam.dim(), p.k_max);
    t.cells.assign(t.alphas.size(), std::vector<CellFit>(p.m_max));
    for (size_t ai = 0; ai < t.alphas.size(); ++ai) {
        for (int m = 1; m <= p.m_max; ++m) {
            auto region_at = [m](double) { return RegionSpec::ball(m); };
            t.cells[ai][m - 1] =
                fit_cell(grid, region_logmags(fam, t.alphas[ai], region_at, grid, p.sample),
                         p, +1);
        }
    }
    return t;
}

ClassificationReport moderate_from_table(const Family& fam, const BallTable& t,
                                         const TestParams& p, const EpsGrid& grid) {
    ClassificationReport rep;
    rep.test_name = "moderate";
    rep.family = fam.name();
    rep.record_params(p, grid);
    double min_slope = kInf;
    bool any_finite = false;
    const CellFit* worst = nullptr;
    for (size_t ai = 0; ai < t.alphas.size(); ++ai) {
        for (int m = 1; m <= p.m_max; ++m) {
            const CellFit& cell = t.cells[ai][m - 1];
            push_sweep(rep, grid, "ball_m" + std::to_string(m), alpha_desc(t.alphas[ai]), m,
                       cell);
            if (cell.diverges) {
                rep.verdict = Verdict::Fail;
                rep.witness("violating_order", mi_order(t.alphas[ai]));
                rep.witness("violating_m", m);
                rep.witness("window_trend", cell.window_trend);
                rep.note("cause", "super-polynomial growth of the ball sup");
                return rep;
            }
            if (cell.fit.saturated_zero) continue;
            any_finite = true;
            if (cell.fit.max_residual > p.resid_tol) {
                rep.verdict = Verdict::Inconclusive;
                rep.witness("residual", cell.fit.max_residual);
                rep.witness("order", mi_order(t.alphas[ai]));
                rep.witness("m", m);
                rep.note("cause", "fit residual beyond tolerance");
                return rep;
            }
            if (cell.fit.slope < min_slope) {
                min_slope = cell.fit.slope;
                worst = &cell;
            }
        }
    }
    rep.verdict = Verdict::Pass;
    if (!any_finite) {
        rep.witness("N", 0);
        rep.note("cause", "all ball sups identically zero");
        return rep;
    }
    int N = static_cast<int>(std::max(0.0, std::ceil(-min_slope - p.exp_tol)));
    rep.witness("N", N);
    rep.witness("min_exponent", min_slope);
    if (worst) rep.witness("deciding_residual", worst->fit.max_residual);
    return rep;
}

ClassificationReport tau_from_table(const Family& fam, const BallTable& t, const TestParams& p,
                                    const EpsGrid& grid) {
    ClassificationReport rep;
    rep.test_name = "tau";
    rep.family = fam.name();
    rep.record_params(p, grid);
    int N_overall = 0;
    for (size_t ai = 0; ai < t.alphas.size(); ++ai) {
        std::vector<double> g(p.m_max + 1, -kInf);  // g[m] = -e(m)/m
        for (int m = 1; m <= p.m_max; ++m) {
            const CellFit& cell = t.cells[ai][m - 1];
            push_sweep(rep, grid, "ball_m" + std::to_string(m), alpha_desc(t.alphas[ai]), m,
                       cell);
            if (cell.diverges) {
                rep.verdict = Verdict::Fail;
                rep.witness("violating_order", mi_order(t.alphas[ai]));
                rep.witness("violating_m", m);
                rep.note("cause", "super-polynomial ball growth");
                return rep;
            }
            if (cell.fit.saturated_zero) continue;
            if (cell.fit.max_residual > p.resid_tol) {
                rep.verdict = Verdict::Inconclusive;
                rep.witness("residual", cell.fit.max_residual);
                return rep;
            }
            g[m] = -cell.fit.slope / m;
        }
        int mid = (p.m_max + 1) / 2;
        if (g[p.m_max] > -kInf && g[mid] > -kInf && g[p.m_max] - g[mid] > p.growth_tol) {
            rep.verdict = Verdict::Fail;
            rep.witness("violating_order", mi_order(t.alphas[ai]));
            rep.witness("growth_over_top_half", g[p.m_max] - g[mid]);
            for (int m = 1; m <= p.m_max; ++m) {
                rep.witness("neg_e_over_m_" + std::to_string(m), g[m]);
            }
            rep.note("cause", "required exponent -e(m)/m grows with m");
            return rep;
        }
        double worst = 0.0;
        for (int m = 1; m <= p.m_max; ++m) {
            if (g[m] > -kInf) worst = std::max(worst, g[m] - p.exp_tol / m);
        }
        N_overall = std::max(N_overall, static_cast<int>(std::ceil(std::max(0.0, worst))));
    }
    rep.verdict = Verdict::Pass;
    rep.witness("N", N_overall);
    return rep;
}

}  // namespace

ClassificationReport test_moderate(const Family& fam, const TestParams& p, const EpsGrid& grid) {
    return moderate_from_table(fam, compute_ball_table(fam, p, grid), p, grid);
}

ClassificationReport test_tau(const Family& fam, const TestParams& p, const EpsGrid& grid) {
    return tau_from_table(fam, compute_ball_table(fam, p, grid), p, grid);
}

ClassificationReport test_negligible(const Family& fam, const TestParams& p, const EpsGrid& grid,
                                     const ClassificationReport& moderate) {
    if (moderate.verdict != Verdict::Pass) {
        throw Error(Error::Kind::Precondition, "negligibility requires a moderate family");
    }
    ClassificationReport rep;
    rep.test_name = "negligible";
    rep.family = fam.name();
    rep.record_params(p, grid);
    MultiIndex zero = mi_zero(fam.dim());
    for (int m = 1; m <= p.m_max; ++m) {
        auto region_at = [m](double) { return RegionSpec::ball(m); };
        CellFit cell =
            fit_cell(grid, region_logmags(fam, zero, region_at, grid, p.sample), p, +1);
        push_sweep(rep, grid, "ball_m" + std::to_string(m), "0", m, cell);
        if (cell.fit.saturated_zero) continue;
        if (cell.fit.max_residual > p.resid_tol) {
            rep.verdict = Verdict::Inconclusive;
            rep.witness("residual", cell.fit.max_residual);
            rep.witness("m", m);
            return rep;
        }
        if (cell.fit.slope < p.n_max - p.exp_tol) {
            // Smallest integer order at which the decay bound fails.
            int n_fail = 1;
            while (n_fail <= p.n_max && cell.fit.slope >= n_fail - p.exp_tol) ++n_fail;
            rep.verdict = Verdict::Fail;
            rep.witness("failing_n", n_fail);
            rep.witness("m", m);
            rep.witness("slope", cell.fit.slope);
            return rep;
        }
    }
    rep.verdict = Verdict::Pass;
    rep.witness("n_max", p.n_max);
    return rep;
}

namespace {

ClassificationReport schwartz_impl(const Family& fam, const TestParams& p, const EpsGrid& grid) {
    ClassificationReport rep;
    rep.test_name = "schwartz";
    rep.family = fam.name();
    rep.record_params(p, grid);
    std::vector<MultiIndex> alphas = multi_indices_up_to(fam.dim(), p.k_max);
    int N_overall = 0;
    for (const MultiIndex& alpha : alphas) {
        std::vector<CellFit> cells(p.m_max);
        for (int m = 1; m <= p.m_max; ++m) {
            auto region_at = [m](double) { return RegionSpec::annulus(m); };
            cells[m - 1] =
                fit_cell(grid, region_logmags(fam, alpha, region_at, grid, p.sample), p, +1);
            push_sweep(rep, grid, "annulus_m" + std::to_string(m), alpha_desc(alpha), m,
                       cells[m - 1]);
            if (cells[m - 1].diverges) {
                rep.verdict = Verdict::Fail;
                rep.witness("violating_order", mi_order(alpha));
                rep.witness("violating_m", m);
                rep.note("cause", "super-polynomial annulus growth");
                return rep;
            }
            if (!cells[m - 1].fit.saturated_zero &&
                cells[m - 1].fit.max_residual > p.resid_tol) {
                rep.verdict = Verdict::Inconclusive;
                rep.witness("residual", cells[m - 1].fit.max_residual);
                return rep;
            }
        }
        for (int k = 0; k <= p.decay_max; ++k) {
            // N_req(m) = mk - e(m); a single N must cover every m.
            auto n_req = [&](int m) {
                const CellFit& c = cells[m - 1];
                return c.fit.saturated_zero ? -kInf : m * k - c.fit.slope;
            };
            int mid = (p.m_max + 1) / 2;
            if (n_req(p.m_max) > -kInf && n_req(mid) > -kInf &&
                n_req(p.m_max) - n_req(mid) > p.growth_tol) {
                rep.verdict = Verdict::Fail;
                rep.witness("violating_order", mi_order(alpha));
                rep.witness("violating_k", k);
                rep.witness("violating_m", p.m_max);
                rep.witness("required_N_growth", n_req(p.m_max) - n_req(mid));
                rep.note("cause", "required N grows with m at fixed decay order");
                return rep;
            }
            double worst = 0.0;
            for (int m = 1; m <= p.m_max; ++m) {
                if (n_req(m) > -kInf) worst = std::max(worst, n_req(m) - p.exp_tol);
            }
            N_overall = std::max(N_overall, static_cast<int>(std::ceil(std::max(0.0, worst))));
        }
    }
    rep.verdict = Verdict::Pass;
    rep.witness("N", N_overall);
    return rep;
}

/// Slow-scale exterior cell rule: pass on saturation, a trusted fit above
/// m - tol, or a pointwise certificate lmag_i <= (m - tol) ln eps_i on the
/// whole tail (covers super-polynomial decay the fit cannot linearize).
enum class SsCell { Pass, Fail, Inconclusive };

SsCell slowscale_cell(const EpsGrid& grid, const CellFit& cell, int m, const TestParams& p) {
    if (cell.fit.saturated_zero) return SsCell::Pass;
    if (cell.fit.max_residual <= p.resid_tol) {
        return cell.fit.slope >= m - p.exp_tol ? SsCell::Pass : SsCell::Fail;
    }
    bool pointwise = true;
    for (int i = grid.tail_begin(); i < static_cast<int>(grid.size()); ++i) {
        if (cell.logmags[i] > (m - p.exp_tol) * ln_eps(grid.eps()[i])) pointwise = false;
    }
    return pointwise ? SsCell::Pass : SsCell::Inconclusive;
}

ClassificationReport slowscale_support_impl(const Family& fam, const TestParams& p,
                                            const EpsGrid& grid) {
    ClassificationReport rep;
    rep.test_name = "slowscale_support";
    rep.family = fam.name();
    rep.record_params(p, grid);
    MultiIndex zero = mi_zero(fam.dim());
    rep.verdict = Verdict::Pass;
    for (int m = 1; m <= p.m_max; ++m) {
        auto region_at = [&, m](double) {
            return RegionSpec::exterior(m, p.exterior_truncation_m);
        };
        CellFit cell =
            fit_cell(grid, region_logmags(fam, zero, region_at, grid, p.sample), p, +1);
        push_sweep(rep, grid, "exterior_m" + std::to_string(m), "0", m, cell);
        SsCell c = slowscale_cell(grid, cell, m, p);
        if (c != SsCell::Pass && rep.verdict == Verdict::Pass) {
            rep.verdict = c == SsCell::Fail ? Verdict::Fail : Verdict::Inconclusive;
            rep.witness("violating_m", m);
            rep.witness("slope", cell.fit.slope);
            rep.witness("residual", cell.fit.max_residual);
        }
        if (c == SsCell::Pass && rep.verdict == Verdict::Pass) {
            rep.witness("slope_m" + std::to_string(m),
                        cell.fit.saturated_zero ? 1e6 : cell.fit.slope);
        }
    }

    // Condition variant with derivatives up to k_max.
    if (fam.dim() == 1) {
        ClassificationReport derivs;
        derivs.test_name = "slowscale_support_derivatives";
        derivs.family = fam.name();
        derivs.verdict = Verdict::Pass;
        for (int k = 0; k <= p.k_max && derivs.verdict == Verdict::Pass; ++k) {
            MultiIndex alpha{k};
            for (int m = 1; m <= p.m_max; ++m) {
                auto region_at = [&, m](double) {
                    return RegionSpec::exterior(m, p.exterior_truncation_m);
                };
                CellFit cell = fit_cell(
                    grid, region_logmags(fam, alpha, region_at, grid, p.sample), p, +1);
                SsCell c = slowscale_cell(grid, cell, m, p);
                if (c != SsCell::Pass) {
                    derivs.verdict =
                        c == SsCell::Fail ? Verdict::Fail : Verdict::Inconclusive;
                    derivs.witness("violating_order", k);
                    derivs.witness("violating_m", m);
                    break;
                }
            }
        }
        rep.subreports.push_back(std::move(derivs));

        // Single-N moment bounds: per derivative order, one N over all
        // spatial moment powers.
        ClassificationReport moments;
        moments.test_name = "slowscale_support_moments";
        moments.family = fam.name();
        moments.verdict = Verdict::Pass;
        for (int k = 0; k <= p.k_max && moments.verdict == Verdict::Pass; ++k) {
            MultiIndex alpha{k};
            std::vector<double> n_req(p.moment_max + 1, -kInf);
            for (int b = 0; b <= p.moment_max; ++b) {
                std::vector<double> lm(grid.size());
                parallel_for(grid.size(), [&](size_t i) {
                    lm[i] = sup_moment_line(fam, alpha, b, grid.eps()[i],
                                            p.exterior_truncation_m, p.sample)
                                .log_mag;
                });
                CellFit cell = fit_cell(grid, std::move(lm), p, +1);
                if (cell.diverges) {
                    moments.verdict = Verdict::Fail;
                    moments.witness("violating_order", k);
                    moments.witness("violating_moment", b);
                    break;
                }
                if (!cell.fit.saturated_zero) n_req[b] = -cell.fit.slope;
            }
            if (moments.verdict != Verdict::Pass) break;
            int mid = (p.moment_max + 1) / 2;
            if (n_req[p.moment_max] > -kInf && n_req[mid] > -kInf &&
                n_req[p.moment_max] - n_req[mid] > p.growth_tol) {
                moments.verdict = Verdict::Fail;
                moments.witness("violating_order", k);
                moments.witness("required_N_growth", n_req[p.moment_max] - n_req[mid]);
            }
        }
        rep.subreports.push_back(std::move(moments));
    }
    return rep;
}

}  // namespace

ClassificationReport test_schwartz(const Family& fam, const TestParams& p, const EpsGrid& grid) {
    return schwartz_impl(fam, p, grid);
}

ClassificationReport test_slowscale_support(const Family& fam, const TestParams& p,
                                            const EpsGrid& grid) {
    return slowscale_support_impl(fam, p, grid);
}

GrowthSuite run_growth_suite(const Family& fam, const TestParams& p, const EpsGrid& grid) {
    GrowthSuite suite;
    BallTable table = compute_ball_table(fam, p, grid);
    suite.moderate = moderate_from_table(fam, table, p, grid);
    suite.tau = tau_from_table(fam, table, p, grid);
    suite.schwartz = schwartz_impl(fam, p, grid);
    suite.slowscale_support = slowscale_support_impl(fam, p, grid);
    return suite;
}

ClassificationReport test_invertible(const Family& fam, const TestParams& p,
                                     const EpsGrid& grid) {
    ClassificationReport rep;
    rep.test_name = "invertible";
    rep.family = fam.name();
    rep.record_params(p, grid);
    MultiIndex zero = mi_zero(fam.dim());
    for (int m = 1; m <= p.m_max; ++m) {
        auto region_at = [m](double) { return RegionSpec::ball(m); };
        std::vector<bool> zero_hits;
        std::vector<double> lm =
            region_logmags(fam, zero, region_at, grid, p.sample, true, &zero_hits);
        for (size_t i = 0; i < grid.size(); ++i) {
            if (zero_hits[i]) {
                rep.verdict = Verdict::Fail;
                rep.witness("m", m);
                rep.witness("eps", grid.eps()[i]);
                rep.note("cause", "infimum is exactly zero at a sampled point");
                return rep;
            }
        }
        CellFit cell = fit_cell(grid, std::move(lm), p, -1);
        push_sweep(rep, grid, "ball_inf_m" + std::to_string(m), "0", m, cell);
        if (cell.diverges) {
            rep.verdict = Verdict::Fail;
            rep.witness("m", m);
            rep.note("cause", "infimum decays super-polynomially");
            return rep;
        }
        if (cell.fit.max_residual > p.resid_tol) {
            rep.verdict = Verdict::Inconclusive;
            rep.witness("m", m);
            rep.witness("residual", cell.fit.max_residual);
            return rep;
        }
        rep.witness("n_m" + std::to_string(m),
                    std::max(0.0, std::ceil(cell.fit.slope - p.exp_tol)));
    }
    rep.verdict = Verdict::Pass;
    return rep;
}

// ---------------------------------------------------------------------------
// a_k machinery.

AkSequence ak_sequence(const Family& fam, const PointNet& x0, int k_max,
                       const std::vector<double>& radii, const TestParams& p,
                       const EpsGrid& grid) {
    if (radii.size() < 2) throw Error(Error::Kind::InvalidInput, "radius schedule too short");
    for (size_t j = 1; j < radii.size(); ++j) {
        if (!(radii[j] < radii[j - 1])) {
            throw Error(Error::Kind::InvalidInput, "radius schedule must decrease");
        }
    }
    AkSequence seq;
    seq.point_desc = x0.name;
    seq.k_max = k_max;
    seq.radii = radii;
    seq.grid_desc = describe_grid(grid);
    seq.a_of_r.assign(k_max + 1, std::vector<double>(radii.size(), 0.0));
    int dim = fam.dim();
    for (int k = 0; k <= k_max; ++k) {
        std::vector<MultiIndex> betas = multi_indices_of_order(dim, k);
        for (size_t j = 0; j < radii.size(); ++j) {
            std::vector<double> lm(grid.size(), -kInf);
            parallel_for(grid.size(), [&](size_t i) {
                double eps = grid.eps()[i];
                auto [anchor, off] = x0.at(eps);
                RegionSpec region;
                if (dim == 1) {
                    region = RegionSpec::classical_ball_anchored(anchor, radii[j]);
                    region.center_offset = [off](double) { return off; };
                } else {
                    if (x0.classical_coords.size() != static_cast<size_t>(dim)) {
                        throw Error(Error::Kind::InvalidInput,
                                    "d >= 2 points need classical coordinates");
                    }
                    region = RegionSpec::classical_ball(x0.classical_coords, radii[j]);
                }
                double best = -kInf;
                for (const MultiIndex& beta : betas) {
                    best = std::max(
                        best, extremum_on_region(fam, beta, eps, region, p.sample).log_mag);
                }
                lm[i] = best;
            });
            CellFit cell = fit_cell(grid, std::move(lm), p, +1);
            seq.a_of_r[k][j] = cell.fit.saturated_zero ? kInf : cell.fit.slope;
            for (size_t i = 0; i < grid.size(); ++i) {
                seq.sweep.push_back(SweepRow{grid.eps()[i], "ball_r" + std::to_string(radii[j]),
                                             std::to_string(k), static_cast<double>(k),
                                             cell.logmags[i], cell.fit.slope,
                                             cell.fit.max_residual});
            }
        }
    }
    size_t last = radii.size() - 1;
    seq.a_k.resize(k_max + 1);
    seq.converged.resize(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        double a_min = seq.a_of_r[k][last];
        double a_prev = seq.a_of_r[k][last - 1];
        seq.a_k[k] = a_min;
        seq.converged[k] = (a_min == kInf && a_prev == kInf) ||
                           (a_min != kInf && a_prev != kInf &&
                            std::abs(a_min - a_prev) <= p.ak_converge_tol);
    }
    return seq;
}

namespace {

int first_confirmed_drop(const AkSequence& seq, const TestParams& p) {
    for (int k = 0; k < seq.k_max; ++k) {
        double a = seq.a_k[k], b = seq.a_k[k + 1];
        if (a == kInf || b == kInf) continue;
        if (seq.converged[k] && seq.converged[k + 1] && b < a - p.drop_tol) return k;
    }
    return -1;
}

double min_finite(const std::vector<double>& vals) {
    double m = kInf;
    for (double v : vals) {
        if (v != kInf) m = std::min(m, v);
    }
    return m;
}

/// Evidence that an exponent sequence is unbounded below: the finite entries
/// over the top half of the order range keep declining AND the decline has
/// already reached clearly negative values. A decline that flattens at or
/// above 0 (or ends in identically-zero sups) stays bounded. +inf entries
/// are identically-zero evaluations and are skipped.
struct BoundedCheck {
    double trend = 0.0;
    double last_finite = kInf;
    bool bounded = true;
};

BoundedCheck bounded_below_check(const std::vector<double>& vals) {
    BoundedCheck out;
    int k_max = static_cast<int>(vals.size()) - 1;
    std::vector<double> xs, ys;
    for (int k = (k_max + 1) / 2; k <= k_max; ++k) {
        if (vals[k] != kInf) {
            xs.push_back(k);
            ys.push_back(vals[k]);
        }
    }
    for (int k = k_max; k >= 0; --k) {
        if (vals[k] != kInf) {
            out.last_finite = vals[k];
            break;
        }
    }
    if (xs.size() < 2) return out;
    out.trend = fit_line(xs, ys).slope;
    out.bounded = !(out.trend <= -0.25 && out.last_finite <= -0.5);
    return out;
}

}  // namespace

ClassificationReport test_convexity(const AkSequence& seq, const TestParams& p) {
    ClassificationReport rep;
    rep.test_name = "convexity";
    rep.family = seq.point_desc;
    rep.grid_desc = seq.grid_desc;
    for (int k = 0; k <= seq.k_max; ++k) {
        if (!seq.converged[k]) {
            rep.verdict = Verdict::Inconclusive;
            rep.witness("unconverged_k", k);
            return rep;
        }
    }
    int drop = first_confirmed_drop(seq, p);
    if (drop < 0) {
        rep.verdict = Verdict::Pass;
        rep.note("cause", "no confirmed drop; convexity constraint not applicable");
        return rep;
    }
    rep.witness("drop_k", drop);
    for (int k = drop; k + 2 <= seq.k_max; ++k) {
        double a0 = seq.a_k[k], a1 = seq.a_k[k + 1], a2 = seq.a_k[k + 2];
        if (a0 == kInf || a1 == kInf || a2 == kInf) continue;
        double second_diff = -a2 + 2 * a1 - a0;  // second difference of -a_k
        rep.witness("second_diff_" + std::to_string(k), second_diff);
        if (second_diff < -p.convexity_tol) {
            rep.verdict = Verdict::Fail;
            rep.witness("violating_k", k);
            return rep;
        }
    }
    rep.verdict = Verdict::Pass;
    return rep;
}

ClassificationReport test_pointstar_regular(const AkSequence& seq, const TestParams& p) {
    ClassificationReport rep;
    rep.test_name = "pointstar_regular";
    rep.family = seq.point_desc;
    rep.grid_desc = seq.grid_desc;
    for (int k = 0; k <= seq.k_max; ++k) {
        rep.witness("a_" + std::to_string(k), seq.a_k[k] == kInf ? 1e6 : seq.a_k[k]);
        if (!seq.converged[k]) {
            rep.verdict = Verdict::Inconclusive;
            rep.witness("unconverged_k", k);
            return rep;
        }
    }
    for (int k = 0; k < seq.k_max; ++k) {
        double a = seq.a_k[k], b = seq.a_k[k + 1];
        if (a == kInf || b == kInf) continue;
        if (b < a - p.drop_tol) {
            rep.verdict = Verdict::Fail;
            rep.witness("first_violating_k", k + 1);
            rep.note("diagnosis",
                     "confirmed drop: a_j -> -infinity as j -> infinity (linear or faster)");
            return rep;
        }
    }
    rep.verdict = Verdict::Pass;
    return rep;
}

ClassificationReport test_classical_regular(const AkSequence& seq, const TestParams& p) {
    ClassificationReport rep;
    rep.test_name = "classical_regular";
    rep.family = seq.point_desc;
    rep.grid_desc = seq.grid_desc;
    for (size_t j = 0; j < seq.radii.size(); ++j) {
        std::vector<double> e(seq.k_max + 1);
        for (int k = 0; k <= seq.k_max; ++k) e[k] = seq.a_of_r[k][j];
        BoundedCheck check = bounded_below_check(e);
        rep.witness("trend_r" + std::to_string(seq.radii[j]), check.trend);
        if (check.bounded) {
            double lo = min_finite(e);
            rep.verdict = Verdict::Pass;
            rep.witness("radius", seq.radii[j]);
            rep.witness("N", lo == kInf ? 0.0 : std::max(0.0, std::ceil(-lo - p.exp_tol)));
            return rep;
        }
    }
    rep.verdict = Verdict::Fail;
    rep.note("cause", "every schedule radius shows exponents dropping with the order");
    return rep;
}

ClassificationReport test_classical_regular(const Family& fam, const PointNet& x0,
                                            const TestParams& p, const EpsGrid& grid) {
    AkSequence seq = ak_sequence(fam, x0, p.k_max, p.radius_schedule, p, grid);
    return test_classical_regular(seq, p);
}

// ---------------------------------------------------------------------------
// Regularity at a generalized point.

namespace {

ClassificationReport bounded_exponents_report(const std::string& test_name,
                                              const std::string& who,
                                              const std::vector<double>& b,
                                              const TestParams& p) {
    ClassificationReport rep;
    rep.test_name = test_name;
    rep.family = who;
    BoundedCheck check = bounded_below_check(b);
    double lo = min_finite(b);
    for (size_t k = 0; k < b.size(); ++k) {
        rep.witness("b_" + std::to_string(k), b[k] == kInf ? 1e6 : b[k]);
    }
    rep.witness("top_half_trend", check.trend);
    if (check.bounded) {
        rep.verdict = Verdict::Pass;
        rep.witness("N", lo == kInf ? 0.0 : std::max(0.0, std::ceil(-lo - p.exp_tol)));
    } else {
        rep.verdict = Verdict::Fail;
        rep.note("cause", "derivative exponents keep dropping with the order");
    }
    return rep;
}

}  // namespace

SharpRegularity test_sharp_regular(const Family& fam, const PointNet& x0, const TestParams& p,
                                   const EpsGrid& grid) {
    if (fam.dim() != 1) {
        throw Error(Error::Kind::InvalidInput, "sharp regularity tests are 1-d");
    }
    SharpRegularity out;
    // Exponents of |d^k u(x_eps)| along the net.
    std::vector<double> b(p.k_max + 1);
    for (int k = 0; k <= p.k_max; ++k) {
        std::vector<double> lm(grid.size());
        parallel_for(grid.size(), [&](size_t i) {
            double eps = grid.eps()[i];
            auto [anchor, off] = x0.at(eps);
            lm[i] = fam.deriv_at({k}, eps, anchor, off).log_mag;
        });
        CellFit cell = fit_cell(grid, std::move(lm), p, +1);
        b[k] = cell.fit.saturated_zero ? kInf : cell.fit.slope;
    }
    out.along_net = bounded_exponents_report("sharp_regular_along_net", x0.name, b, p);
    out.along_net.grid_desc = describe_grid(grid);
    out.along_net.record_params(p, grid);

    // Sharp-ball variant: some order n in 1..n_sharp_max must work.
    out.sharp_ball.test_name = "sharp_regular_ball";
    out.sharp_ball.family = x0.name;
    out.sharp_ball.record_params(p, grid);
    out.sharp_ball.verdict = Verdict::Fail;
    for (int n = 1; n <= p.n_sharp_max; ++n) {
        std::vector<double> d(p.k_max + 1);
        for (int k = 0; k <= p.k_max; ++k) {
            std::vector<double> lm(grid.size());
            parallel_for(grid.size(), [&](size_t i) {
                double eps = grid.eps()[i];
                auto [anchor, off] = x0.at(eps);
                RegionSpec region = RegionSpec::sharp_ball(
                    anchor, [off](double) { return off; }, n);
                lm[i] = extremum_on_region(fam, {k}, eps, region, p.sample).log_mag;
            });
            CellFit cell = fit_cell(grid, std::move(lm), p, +1);
            d[k] = cell.fit.saturated_zero ? kInf : cell.fit.slope;
        }
        ClassificationReport sub = bounded_exponents_report(
            "sharp_ball_n" + std::to_string(n), x0.name, d, p);
        bool ok = sub.verdict == Verdict::Pass;
        out.sharp_ball.subreports.push_back(std::move(sub));
        if (ok && out.sharp_ball.verdict != Verdict::Pass) {
            out.sharp_ball.verdict = Verdict::Pass;
            out.sharp_ball.witness("working_n", n);
        }
    }
    if (out.sharp_ball.verdict != Verdict::Pass) {
        out.sharp_ball.note("cause", "no sharp-ball order up to the cap keeps exponents bounded");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constructions.

Family cutoff_glue(const Family& fam, const ExactScalar& radius_net) {
    auto base = std::make_shared<Family>(fam);
    auto net = std::make_shared<ExactScalar>(radius_net);
    int d = fam.dim();
    auto radius_at = [net](double eps) {
        double a = net->eval(eps).real();
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw Error(Error::Kind::InvalidInput, "cutoff radius net must be positive");
        }
        return a;
    };
    Family glued(
        d, FamilyKind::Programmatic, fam.name() + "*cutoff",
        [base, radius_at, d](const MultiIndex& alpha, double eps, std::span<const double> x) {
            double a = radius_at(eps);
            const PlateauCutoff& chi = PlateauCutoff::instance();
            // All derivative mass of chi lives on 1 <= |x_i|/a <= 2.
            for (int i = 0; i < d; ++i) {
                if (std::abs(x[i]) >= 2.0 * a) return LogComplex::zero();
            }
            LogComplex acc = LogComplex::zero();
            MultiIndex beta(alpha.size(), 0);
            while (true) {
                double coeff = 1.0;
                LogComplex chi_part = LogComplex::one();
                for (int i = 0; i < d; ++i) {
                    int rest = alpha[i] - beta[i];
                    for (int c = 1; c <= rest; ++c) {
                        coeff = coeff * (alpha[i] - rest + c) / c;
                    }
                    double cv = chi.deriv(rest, x[i] / a);
                    chi_part = chi_part * LogComplex::from_real(cv) *
                               LogComplex::from_log_real(-rest * std::log(a));
                    if (chi_part.is_zero()) break;
                }
                if (!chi_part.is_zero()) {
                    acc = acc + LogComplex::from_real(coeff) * chi_part *
                                    base->deriv(beta, eps, x);
                }
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
            return acc;
        },
        fam.max_order());
    glued.set_support_radius(
        [radius_at, d](double eps) { return 2.0 * radius_at(eps) * std::sqrt(double(d)); });
    if (d == 1) {
        glued.set_focus([radius_at, base](double eps) {
            double a = radius_at(eps);
            std::vector<FocusPatch> patches = base->focus_patches(eps);
            patches.push_back(FocusPatch{-1, 1.5 * a, 0.5 * a});
            patches.push_back(FocusPatch{-1, -1.5 * a, 0.5 * a});
            return patches;
        });
    }
    return glued;
}

Family taylor_companion(const Family& fam, const PointNet& x0,
                        std::function<int(double)> degree_rule, double cutoff_radius) {
    if (fam.dim() != 1) {
        throw Error(Error::Kind::InvalidInput, "taylor companion is 1-d");
    }
    if (!(cutoff_radius > 0)) {
        throw Error(Error::Kind::InvalidInput, "cutoff radius must be positive");
    }
    auto base = std::make_shared<Family>(fam);
    auto rule = degree_rule ? std::move(degree_rule) : [](double eps) {
        return static_cast<int>(std::ceil(std::log2(std::max(2.0, std::log2(1.0 / eps)))));
    };
    struct Cache {
        std::mutex mu;
        std::map<double, std::vector<LogComplex>> coeffs;
    };
    auto cache = std::make_shared<Cache>();
    auto at = x0.at;
    int max_order = fam.max_order();
    auto coeffs_for = [base, cache, at, rule, max_order](double eps) {
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            auto it = cache->coeffs.find(eps);
            if (it != cache->coeffs.end()) return it->second;
        }
        int deg = std::min(std::max(0, rule(eps)), max_order);
        auto [anchor, off] = at(eps);
        std::vector<LogComplex> c(deg + 1);
        for (int k = 0; k <= deg; ++k) c[k] = base->deriv_at({k}, eps, anchor, off);
        std::lock_guard<std::mutex> lock(cache->mu);
        cache->coeffs.emplace(eps, c);
        return c;
    };
    auto anchors = std::make_shared<std::vector<double>>(fam.anchors());
    auto anchor_pos = [anchors](int a) { return a < 0 ? 0.0 : anchors->at(a); };
    // Evaluation is anchored: delta against x0 stays exact when the query
    // shares the net's anchor.
    auto eval_at = [coeffs_for, at, cutoff_radius, anchor_pos](const MultiIndex& alpha,
                                                               double eps, int anchor,
                                                               double off) -> LogComplex {
        auto [canchor, coff] = at(eps);
        double delta;
        if (anchor == canchor) {
            delta = off - coff;
        } else {
            delta = (anchor_pos(anchor) + off) - (anchor_pos(canchor) + coff);
        }
        const PlateauCutoff& chi = PlateauCutoff::instance();
        double scale = 2.0 / cutoff_radius;  // chi argument: |t| <= 1 on radius/2
        double t = delta * scale;
        if (std::abs(t) >= 2.0) return LogComplex::zero();
        std::vector<LogComplex> c = coeffs_for(eps);
        int deg = static_cast<int>(c.size()) - 1;
        int j = alpha[0];
        LogComplex acc = LogComplex::zero();
        double binom = 1.0;
        for (int i = 0; i <= j; ++i) {
            if (i > 0) binom = binom * (j - i + 1) / i;
            double chi_v = chi.deriv(j - i, t);
            if (chi_v == 0.0) continue;
            // w^(i)(x) = sum_{k >= i} c_k / (k-i)! delta^{k-i}
            LogComplex w = LogComplex::zero();
            double fact = 1.0;
            for (int k = i; k <= deg; ++k) {
                int d = k - i;
                if (d > 0) fact *= d;
                LogComplex dpow =
                    d == 0 ? LogComplex::one()
                           : (delta == 0.0
                                  ? LogComplex::zero()
                                  : LogComplex::from_log_real(d * std::log(std::abs(delta)),
                                                              delta < 0 && d % 2 ? -1 : 1));
                w = w + c[k] * dpow / LogComplex::from_real(fact);
            }
            acc = acc + LogComplex::from_real(binom * chi_v * std::pow(scale, j - i)) * w;
        }
        return acc;
    };
    Family out(
        1, FamilyKind::Programmatic, fam.name() + "~taylor",
        [eval_at](const MultiIndex& alpha, double eps, std::span<const double> x) {
            return eval_at(alpha, eps, -1, x[0]);
        },
        fam.max_order());
    out.set_anchors(fam.anchors());
    out.set_anchored_rule(
        [eval_at](const MultiIndex& alpha, double eps, int anchor, double off) {
            return eval_at(alpha, eps, anchor, off);
        });
    out.set_support_radius([at, cutoff_radius, anchor_pos](double eps) {
        auto [anchor, off] = at(eps);
        return std::abs(anchor_pos(anchor) + off) + cutoff_radius;
    });
    out.set_focus([at, cutoff_radius](double eps) {
        auto [anchor, off] = at(eps);
        return std::vector<FocusPatch>{FocusPatch{anchor, off, cutoff_radius}};
    });
    return out;
}

}  // namespace gfa
