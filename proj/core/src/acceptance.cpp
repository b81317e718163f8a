#include "gfa/acceptance.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "gfa/bump.hpp"
#include "gfa/examples.hpp"
#include "gfa/fourier.hpp"
#include "gfa/parser.hpp"
#include "gfa/report_json.hpp"

namespace gfa {

namespace {

using Clock = std::chrono::steady_clock;

struct Runner {
    AcceptanceSummary summary;
    std::ostream& log;

    explicit Runner(std::ostream& out) : log(out) {}

    void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
        auto t0 = Clock::now();
        CriterionResult row;
        row.name = name;
        try {
            auto [pass, detail] = fn();
            row.pass = pass;
            row.detail = detail;
        } catch (const std::exception& e) {
            row.pass = false;
            row.detail = std::string("exception: ") + e.what();
        }
        row.seconds =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count() /
            1000.0;
        log << (row.pass ? "PASS" : "FAIL") << "  " << name << "  (" << row.seconds << " s)  "
            << row.detail << "\n";
        summary.rows.push_back(std::move(row));
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

ExactScalar mono(double c, double a, int b = 0) {
    return ExactScalar::monomial(Complex(c, 0.0), a, b);
}

// ---- exact-layer laws ------------------------------------------------------

std::pair<bool, std::string> exact_layer_laws() {
    std::mt19937 rng(0x5eed0001);
    std::uniform_int_distribution<int> nterms(0, 4);
    std::uniform_int_distribution<int> sixteenths(-48, 48);
    std::uniform_int_distribution<int> logs(-2, 2);
    std::uniform_real_distribution<double> coeff(0.5, 2.0);
    std::bernoulli_distribution flip(0.5);
    auto random_scalar = [&]() {
        std::vector<Term> terms;
        int n = nterms(rng);
        for (int i = 0; i < n; ++i) {
            terms.emplace_back(Complex(coeff(rng) * (flip(rng) ? 1 : -1), 0.0),
                               sixteenths(rng) / 16.0, logs(rng));
        }
        return ExactScalar::normalize(std::move(terms));
    };
    for (int trial = 0; trial < 10000; ++trial) {
        ExactScalar a = random_scalar(), b = random_scalar(), c = random_scalar();
        double va = valuation(a), vb = valuation(b);
        double vs = valuation(a + b);
        if (!(vs >= std::min(va, vb))) return {false, "ultrametric valuation violated"};
        if (va != vb && vs != std::min(va, vb)) return {false, "strict ultrametric violated"};
        if (!(sharp_norm(a + b) <= std::max(sharp_norm(a), sharp_norm(b)))) {
            return {false, "sharp-norm ultrametric violated"};
        }
        if (!a.is_zero() && !b.is_zero() && valuation(a * b) != va + vb) {
            return {false, "valuation additivity violated"};
        }
        if (!(interleave(a, b, Idempotent::all()) == b) ||
            !(interleave(a, b, Idempotent::none()) == a) ||
            !(interleave(a, a, Idempotent::all()) == a) ||
            !(interleave(a, a, Idempotent::none()) == a)) {
            return {false, "idempotent interleave law violated"};
        }
        (void)c;
    }
    return {true, "10000 triples, zero tolerance"};
}

// ---- valuation estimator ---------------------------------------------------

std::pair<bool, std::string> valuation_estimator() {
    EpsGrid g = EpsGrid::dyadic();
    std::mt19937 rng(0x5eed0002);
    std::uniform_int_distribution<int> quarters(-12, 12);
    std::uniform_int_distribution<int> one_log(-1, 1);
    std::uniform_real_distribution<double> coeff(0.5, 2.0);
    double worst_plain = 0.0, worst_log = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        double a = quarters(rng) / 4.0;
        int b = one_log(rng);
        double gap = 0.5 + std::abs(quarters(rng)) / 8.0;
        ExactScalar s = mono(coeff(rng), a, b) + mono(coeff(rng), a + gap);
        ExponentFit f = fit_exponent(SampledScalar::from_exact(s, g));
        double err = std::abs(f.slope - valuation(s));
        if (b == 0) {
            worst_plain = std::max(worst_plain, err);
            if (err > 0.05) return {false, "plain scalar error " + fmt(err) + " > 0.05"};
        } else {
            worst_log = std::max(worst_log, err);
            if (err > 0.1) return {false, "log-factor error " + fmt(err) + " > 0.1"};
        }
    }
    return {true, "worst plain " + fmt(worst_plain) + ", worst log " + fmt(worst_log)};
}

// ---- the strict-growth family ----------------------------------------------

std::pair<bool, std::string> strict_growth_family() {
    TestParams p = canonical_params();
    EpsGrid g = canonical_grid();
    Family fam = make_prop34_family(3);
    // ball-m order-0 exponents dominate -m^2
    for (int m = 1; m <= 3; ++m) {
        std::vector<double> lm(g.size());
        for (size_t i = 0; i < g.size(); ++i) {
            lm[i] = sup_on_region(fam, {0}, g.eps()[i], RegionSpec::ball(m), p.sample).log_mag;
        }
        CellFit cell = fit_cell(g, std::move(lm), p, +1);
        if (!(cell.fit.slope <= -(m * m))) {
            return {false, "ball-" + std::to_string(m) + " exponent " + fmt(cell.fit.slope) +
                               " above -m^2"};
        }
    }
    ClassificationReport mod = test_moderate(fam, p, g);
    if (mod.verdict != Verdict::Pass) return {false, "moderateness did not pass"};
    ClassificationReport tau = test_tau(fam, p, g);
    if (tau.verdict != Verdict::Fail) return {false, "tempered growth did not fail"};
    double growth = tau.witness_value("growth_over_top_half");
    if (!(growth > 0.5)) return {false, "required exponent growth not superlinear"};
    return {true, "exponents dominate -m^2; moderate pass, tempered fail (growth " +
                      fmt(growth) + ")"};
}

// ---- growth hierarchy over the battery --------------------------------------

std::pair<bool, std::string> growth_hierarchy() {
    TestParams p = canonical_params();
    p.k_max = 2;
    EpsGrid g = canonical_grid();
    int checked = 0;
    for (const CanonicalFamily& cf : canonical_families()) {
        GrowthSuite suite = run_growth_suite(cf.family, p, g);
        auto pass = [](const ClassificationReport& r) { return r.verdict == Verdict::Pass; };
        if (pass(suite.slowscale_support) && !pass(suite.schwartz)) {
            return {false, cf.family.name() + ": slow-scale support without rapid decrease"};
        }
        if (pass(suite.schwartz) && !pass(suite.tau)) {
            return {false, cf.family.name() + ": rapid decrease without tempered growth"};
        }
        if (pass(suite.tau) && !pass(suite.moderate)) {
            return {false, cf.family.name() + ": tempered growth without moderateness"};
        }
        auto expect = [&](const char* name, const ClassificationReport& r) {
            auto it = cf.expected.find(name);
            return it == cf.expected.end() || it->second == r.verdict;
        };
        if (!expect("moderate", suite.moderate) || !expect("tau", suite.tau) ||
            !expect("schwartz", suite.schwartz) ||
            !expect("slowscale_support", suite.slowscale_support)) {
            return {false, cf.family.name() + ": measured verdict differs from annotation"};
        }
        ++checked;
    }
    return {true, std::to_string(checked) + " families, zero violations"};
}

// ---- the double-sequence construction ---------------------------------------

std::pair<bool, std::string> double_sequence_construction() {
    Example510 ex = make_example_510({});
    // closed form vs quadrature, m <= 3, n <= 8, k <= 6, 5 probes per branch
    for (int m = 1; m <= 3; ++m) {
        for (int n = 1; n <= 8; ++n) {
            for (int k = 0; k <= 6; ++k) {
                if (k >= m && k - m + 1 > BumpKernel::kMaxOrder) continue;
                for (double sigma : {-0.62, -0.21, 0.17, 0.44, 0.73}) {
                    LogComplex closed = ex.closed_deriv(m, n, k, sigma);
                    LogComplex oracle = ex.oracle_deriv(m, n, k, sigma);
                    if (closed.is_zero() != oracle.is_zero()) {
                        return {false, "zero/nonzero mismatch at m=" + std::to_string(m) +
                                           " n=" + std::to_string(n) + " k=" + std::to_string(k)};
                    }
                    if (closed.is_zero()) continue;
                    double rel = std::abs(std::expm1(closed.log_mag - oracle.log_mag)) +
                                 std::abs(closed.dir - oracle.dir);
                    if (rel > 1e-6) {
                        return {false, "quadrature mismatch " + fmt(rel) + " at m=" +
                                           std::to_string(m) + " n=" + std::to_string(n) +
                                           " k=" + std::to_string(k) + " sigma=" + fmt(sigma)};
                    }
                }
            }
        }
    }
    // the five regularity sub-verdicts
    TestParams p = canonical_params();
    p.k_max = 8;
    ClassificationReport suite = verify_example_510({}, p, 3);
    if (suite.verdict != Verdict::Pass) {
        return {false, "regularity sub-verdicts do not match the construction"};
    }
    // drop slope at the peaks: -(m+1) per order within 5%
    TestParams pq = canonical_params();
    for (int m = 1; m <= 3; ++m) {
        EpsGrid g = ex.branch_grid(m, 5, 24, 12);  // eps in [2^-24.x, 2^-5.x]
        int k_max = m + 4;
        AkSequence seq =
            ak_sequence(ex.family(), ex.peak_net(m), k_max, pq.radius_schedule, pq, g);
        std::vector<double> xs, ys;
        for (int k = m; k <= k_max; ++k) {
            if (seq.a_k[k] == kInf) return {false, "unexpected zero sup at the peak"};
            xs.push_back(k);
            ys.push_back(seq.a_k[k]);
        }
        double slope = fit_line(xs, ys).slope;
        if (std::abs(slope + (m + 1.0)) > 0.05 * (m + 1.0)) {
            return {false, "drop slope " + fmt(slope) + " at peak " + std::to_string(m)};
        }
    }
    return {true, "oracle agreement <= 1e-6; five sub-verdicts match; drop slopes within 5%"};
}

// ---- convexity of -a_k -------------------------------------------------------

std::pair<bool, std::string> convexity_of_drops() {
    TestParams p = canonical_params();
    p.k_max = 4;
    AkSequence moll = ak_sequence(make_mollifier_family(), PointNet::constant(0.0), p.k_max,
                                  p.radius_schedule, p, canonical_grid());
    if (test_convexity(moll, p).verdict != Verdict::Pass) {
        return {false, "mollifier at 0: second differences below -0.15"};
    }
    Example510 ex = make_example_510({});
    for (int m = 1; m <= 3; ++m) {
        EpsGrid g = ex.branch_grid(m, 5, 24, 12);
        AkSequence seq =
            ak_sequence(ex.family(), ex.peak_net(m), m + 4, p.radius_schedule, p, g);
        if (test_convexity(seq, p).verdict != Verdict::Pass) {
            return {false, "double-sequence family at peak " + std::to_string(m)};
        }
    }
    return {true, "second differences of -a_k >= -0.15 at every confirmed drop"};
}

// ---- pointwise-star vs classical agreement -----------------------------------

std::pair<bool, std::string> regularity_agreement() {
    TestParams p = canonical_params();
    p.k_max = 6;
    EpsGrid g = canonical_grid();
    int agreements = 0;
    auto check_point = [&](const Family& fam, const PointNet& x0, const EpsGrid& grid,
                           Verdict expected) -> std::string {
        AkSequence seq = ak_sequence(fam, x0, p.k_max, p.radius_schedule, p, grid);
        Verdict star = test_pointstar_regular(seq, p).verdict;
        Verdict classical = test_classical_regular(seq, p).verdict;
        if (star != classical) return fam.name() + "@" + x0.name + ": verdicts disagree";
        if (star != expected) return fam.name() + "@" + x0.name + ": unexpected verdict";
        ++agreements;
        return "";
    };
    Family bump = make_bump_family();
    for (double x0 : {-0.7, 0.0, 0.3}) {
        std::string err = check_point(bump, PointNet::constant(x0), g, Verdict::Pass);
        if (!err.empty()) return {false, err};
    }
    std::string err =
        check_point(make_mollifier_family(), PointNet::constant(0.0), g, Verdict::Fail);
    if (!err.empty()) return {false, err};

    Example510 ex = make_example_510({});
    // compactum [a_3/2, 1]: the peaks fail, generic points pass
    for (int m = 1; m <= 3; ++m) {
        EpsGrid bg = ex.branch_grid(m, 5, 24, 12);
        err = check_point(ex.family(), PointNet::constant(Example510::peak(m)), bg,
                          Verdict::Fail);
        if (!err.empty()) return {false, err};
    }
    {
        EpsGrid bg = ex.branch_grid(1, 5, 24, 12);
        for (double x0 : {0.3, 0.9}) {
            err = check_point(ex.family(), PointNet::constant(x0), bg, Verdict::Pass);
            if (!err.empty()) return {false, err};
        }
        // compactum [-1, -0.1]: identically zero there
        for (double x0 : {-1.0, -0.55, -0.1}) {
            err = check_point(ex.family(), PointNet::constant(x0), bg, Verdict::Pass);
            if (!err.empty()) return {false, err};
        }
    }
    return {true, std::to_string(agreements) + " probed points, zero disagreements"};
}

// ---- Fourier engine -----------------------------------------------------------

std::pair<bool, std::string> fourier_engine() {
    // Gaussian transform against the analytic form
    {
        SpectrumSample s = dft_family(make_gauss_family(), 0.25, 8.0, 1 << 12);
        TestFunction tf = TestFunction::gauss();
        for (size_t i = 0; i < s.xi.size(); ++i) {
            if (std::abs(s.values[i] - *tf.analytic_hat(s.xi[i])) > 1e-8) {
                return {false, "gaussian transform off the analytic form"};
            }
        }
    }
    std::vector<Family> panel;
    panel.push_back(make_bump_family());
    panel.push_back(make_gauss_family());
    panel.push_back(make_mollifier_family());
    panel.push_back(make_modulated_bump_family());
    panel.push_back(make_oscillatory_family());
    Family gauss = make_gauss_family();
    FourierPolicy policy;
    policy.estimate_accuracy = false;
    double worst_parseval = 0.0, worst_inversion = 0.0;
    for (int k = 4; k <= 10; ++k) {
        double eps = std::exp2(-k);
        for (const Family& u : panel) {
            double L = u.name() == "gauss" ? 8.0 : 4.0;
            int npts = u.name() == "mollifier" ? (1 << 20) : (1 << 16);
            double pv = parseval_check(u, gauss, eps, std::max(L, 8.0), npts);
            worst_parseval = std::max(worst_parseval, pv);
            if (pv > 1e-8) {
                return {false, u.name() + " parseval " + fmt(pv) + " at eps=2^-" +
                                   std::to_string(k)};
            }
            SpectrumSample s = dft_family(u, eps, L, npts, policy);
            for (int i = 0; i < 24; ++i) {
                double x = -0.8 * L + (i + 0.5) * (1.6 * L / 24.0);
                double xs[1] = {x};
                Complex expect = u.value(eps, std::span<const double>(xs, 1)).to_complex();
                double err = std::abs(inverse_dft_at(s, x) - expect);
                worst_inversion = std::max(worst_inversion, err);
                if (err > 1e-7) {
                    return {false, u.name() + " inversion " + fmt(err) + " at eps=2^-" +
                                       std::to_string(k)};
                }
            }
        }
    }
    return {true, "parseval <= " + fmt(worst_parseval) + ", inversion <= " +
                      fmt(worst_inversion) + ", gaussian <= 1e-8"};
}

// ---- slow scale spectrum = support + spectrum sides ---------------------------

std::pair<bool, std::string> spectrum_intersection() {
    TestParams p = canonical_params();
    EpsGrid g = canonical_grid();
    ClassificationReport bump = test_gs_infinity(make_bump_family(), p, g);
    if (bump.verdict != Verdict::Pass) return {false, "fixed bump did not pass"};
    ClassificationReport mod = test_gs_infinity(make_modulated_bump_family(), p, g);
    if (mod.verdict != Verdict::Fail || mod.witness_value("support_pass") != 1.0 ||
        mod.witness_value("spectrum_pass") != 0.0) {
        return {false, "modulated bump must fail on the spectrum side"};
    }
    ClassificationReport moll = test_gs_infinity(make_mollifier_family(), p, g);
    if (moll.verdict != Verdict::Fail || moll.witness_value("support_pass") != 1.0 ||
        moll.witness_value("spectrum_pass") != 0.0) {
        return {false, "mollifier must fail on the spectrum side"};
    }
    // peak trajectory of the modulated bump
    Family modf = make_modulated_bump_family();
    for (int k = 6; k <= 14; ++k) {
        double eps = std::exp2(-k);
        SpectrumSample s = dft_family_auto(modf, eps);
        double ratio = s.peak_xi() * eps;
        if (ratio < 0.9 || ratio > 1.1) {
            return {false, "peak trajectory ratio " + fmt(ratio) + " at eps=2^-" +
                               std::to_string(k)};
        }
    }
    return {true, "bump passes; modulated bump and mollifier fail on the spectrum side; "
                  "peak trajectory within [0.9, 1.1]"};
}

// ---- tempered-equality agreement ----------------------------------------------

std::pair<bool, std::string> tempered_agreement() {
    TestParams p = canonical_params();
    EpsGrid g = fourier_grid();
    int agreed = 0;
    for (Family fam : {make_oscillatory_family(), make_bump_family(), make_eps_bump_family()}) {
        ClassificationReport rep = test_tempered_equality(fam, p, g);
        if (rep.verdict != Verdict::Pass) {
            return {false, fam.name() + ": sub-verdicts disagree"};
        }
        ++agreed;
    }
    // oscillatory pairing slope >= 8
    PairingResult pr = pairing(make_oscillatory_family(), TestFunction::gauss(), g);
    ExponentFit f = fit_exponent(pr.values);
    if (!(f.saturated_zero || f.slope >= 8.0)) {
        return {false, "oscillatory pairing slope " + fmt(f.slope) + " < 8"};
    }
    return {true, "3/3 agreements; oscillatory pairing slope " +
                      (f.saturated_zero ? std::string("saturated") : fmt(f.slope))};
}

// ---- DSL ----------------------------------------------------------------------

const char* kCorpus[40] = {
    "1", "0.5", "1e-05", "eps", "x1", "x2 + x1", "x1 + 2", "x1 - 2", "2 * x1", "x1 / 2",
    "x1^2", "x1^-2", "eps^-1", "eps^(1/2)", "x1^(3/2)", "x1 + x1^2 + x1^3",
    "x1 * x1 - x1 / x1", "(x1 + 1) * (x1 - 1)", "x1 - (x1 - 1)", "x1 / (x1 + 1) / (x1 + 2)",
    "-x1", "-(x1 + 1)", "-1 * x1", "2 - -3", "exp(x1)", "sin(x1)", "cos(x1)",
    "log(1 + x1^2)", "sqrt(1 + x1^2)", "bump(x1)", "gauss(x1)", "bumpd3(x1)",
    "eps^-1 * bump(x1/eps)", "bump(x1) * sin(x1/eps)", "bump(x1) * sin(3 * x1/eps)",
    "gauss(x1 - eps^-1)", "exp(0 - 1/eps) * gauss(x1)",
    "(1 + x1^2)^(log(1 + x1^2) / log(1/eps))", "eps^2.5 * x1^(0.25)",
    "sin(cos(exp(x1))) + sqrt(exp(2 * log(1 + x1^2)))"};

std::pair<bool, std::string> dsl_checks() {
    for (const char* src : kCorpus) {
        ExprPtr e = parse(src);
        if (!structurally_equal(e, parse(print(e)))) {
            return {false, std::string("round-trip failed: ") + src};
        }
    }
    // symbolic vs finite differences, 100 probes per family
    std::mt19937 rng(0x5eed0003);
    std::uniform_real_distribution<double> interior(-0.8, 0.8);
    auto fd5 = [](const std::function<double(double)>& f, double x, double h) {
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    };
    for (const char* src :
         {"gauss(x1)", "sin(x1) * cos(2 * x1)", "log(1 + x1^2)", "sqrt(1 + x1^2)",
          "x1^3 - 2 * x1", "exp(x1) / (1 + x1^2)", "bump(x1/2)"}) {
        ExprPtr e = parse(src);
        ExprPtr d = differentiate(e, 0);
        for (int i = 0; i < 100; ++i) {
            double x = interior(rng);
            double xs[1] = {x};
            auto value = [&](double t) {
                double ts[1] = {t};
                return eval(e, 0.5, std::span<const double>(ts, 1)).real();
            };
            double sym = eval(d, 0.5, std::span<const double>(xs, 1)).real();
            double fd = fd5(value, x, 1e-4);
            if (std::abs(sym - fd) >
                std::max(1e-6 * std::max(std::abs(sym), std::abs(fd)), 1e-10)) {
                return {false, std::string("derivative mismatch for ") + src};
            }
        }
    }
    return {true, "40-case round-trip; 7 families x 100 probes within 1e-6"};
}

// ---- determinism ---------------------------------------------------------------

std::pair<bool, std::string> determinism() {
    TestParams p = canonical_params();
    p.k_max = 2;
    EpsGrid g = canonical_grid();
    auto snapshot = [&]() {
        std::string out;
        out += report_to_json(test_moderate(make_mollifier_family(), p, g));
        out += report_to_json(test_slowscale_support(make_bump_family(), p, g));
        out += report_to_json(test_tempered_equality(make_eps_bump_family(), p, fourier_grid()));
        return out;
    };
    std::string a = snapshot();
    std::string b = snapshot();
    if (a != b) return {false, "re-computed reports differ byte-wise"};
    return {true, "byte-identical reports across repeated runs"};
}

}  // namespace

AcceptanceSummary run_acceptance(const AcceptanceOptions& opts, std::ostream& log) {
    Runner r(log);
    auto t0 = Clock::now();
    r.run("exact-layer laws (zero tolerance)", exact_layer_laws);
    r.run("valuation estimator (0.05 / 0.1 with one log)", valuation_estimator);
    r.run("grammar corpus and symbolic derivatives", dsl_checks);
    if (opts.quick) {
        // one family per class through the growth suite
        r.run("quick growth spot checks", []() -> std::pair<bool, std::string> {
            TestParams p = canonical_params();
            p.k_max = 1;
            EpsGrid g = canonical_grid();
            if (test_slowscale_support(make_bump_family(), p, g).verdict != Verdict::Pass) {
                return {false, "bump support"};
            }
            if (test_tau(make_prop34_family(1), p, g).verdict != Verdict::Fail) {
                return {false, "strict-growth tempered"};
            }
            if (test_schwartz(make_poly_family(), p, g).verdict != Verdict::Fail) {
                return {false, "polynomial rapid decrease"};
            }
            return {true, "3 classes"};
        });
    } else {
        r.run("strict-growth family (ball exponents, moderate/tempered)", strict_growth_family);
        r.run("growth hierarchy over the battery", growth_hierarchy);
        r.run("double-sequence construction (oracle, verdicts, drops)",
              double_sequence_construction);
        r.run("convexity of -a_k past drops", convexity_of_drops);
        r.run("pointwise-star vs classical agreement", regularity_agreement);
        r.run("fourier engine (parseval, inversion, gaussian)", fourier_engine);
        r.run("spectrum intersection and peak trajectory", spectrum_intersection);
        r.run("tempered-equality agreement", tempered_agreement);
        r.run("deterministic reports", determinism);
    }
    r.summary.total_seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count() /
        1000.0;
    bool ok = true;
    for (const CriterionResult& row : r.summary.rows) ok = ok && row.pass;
    if (!opts.quick && r.summary.total_seconds > 600.0) {
        ok = false;
        log << "FAIL  runtime budget: battery took " << r.summary.total_seconds << " s\n";
    }
    r.summary.all_pass = ok;
    log << (ok ? "all criteria passed" : "criteria FAILED") << " in "
        << r.summary.total_seconds << " s\n";
    return r.summary;
}

std::string acceptance_to_json(const AcceptanceSummary& summary) {
    nlohmann::ordered_json j;
    j["version"] = kArtifactVersion;
    j["all_pass"] = summary.all_pass;
    j["total_seconds"] = summary.total_seconds;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const CriterionResult& r : summary.rows) {
        nlohmann::ordered_json row;
        row["name"] = r.name;
        row["pass"] = r.pass;
        row["detail"] = r.detail;
        row["seconds"] = r.seconds;
        rows.push_back(row);
    }
    j["criteria"] = rows;
    return j.dump(2);
}

}  // namespace gfa
