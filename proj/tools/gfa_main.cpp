// gfa: batch front-end for the generalized-function asymptotics toolkit.
// Subcommands: classify, spectrum, verify, parse.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "gfa/acceptance.hpp"
#include "gfa/examples.hpp"
#include "gfa/fourier.hpp"
#include "gfa/parser.hpp"
#include "gfa/report_json.hpp"

namespace {

using namespace gfa;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 3;

struct CommonOpts {
    std::string builtin;
    std::string family_path;
    std::string tests_csv;
    std::string eps_grid;
    std::string json_path;
    std::string csv_path;
    int m_max = -1;
    int k_max = -1;
    double n_max = -1;
    bool quick = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--builtin", o.builtin, "builtin family name");
    cmd->add_option("--family", o.family_path, "family definition file");
    cmd->add_option("--tests", o.tests_csv, "comma-separated test list");
    cmd->add_option("--eps-grid", o.eps_grid, "geom:<start>:<stop>:<count>");
    cmd->add_option("--json", o.json_path, "write the JSON report here");
    cmd->add_option("--csv", o.csv_path, "write the sweep CSV here");
    cmd->add_option("--m-max", o.m_max, "largest ball/annulus index");
    cmd->add_option("--k-max", o.k_max, "largest derivative order");
    cmd->add_option("--n-max", o.n_max, "negligibility threshold");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

struct LoadedFamily {
    Family family;
    std::optional<std::map<std::string, Verdict>> expected;
};

LoadedFamily load_family(const CommonOpts& o) {
    if (!o.builtin.empty() && !o.family_path.empty()) {
        throw Error(Error::Kind::InvalidInput, "--builtin and --family are exclusive");
    }
    if (!o.builtin.empty()) {
        for (CanonicalFamily& cf : canonical_families()) {
            if (cf.family.name() == o.builtin) {
                return LoadedFamily{std::move(cf.family), std::move(cf.expected)};
            }
        }
        throw Error(Error::Kind::InvalidInput, "unknown builtin family: " + o.builtin);
    }
    if (!o.family_path.empty()) {
        FamilyFile f = load_family_file(o.family_path);
        return LoadedFamily{
            family_from_expr(f.u, f.dim, 16, f.name.empty() ? "family" : f.name), std::nullopt};
    }
    throw Error(Error::Kind::InvalidInput, "one of --builtin or --family is required");
}

EpsGrid grid_from(const CommonOpts& o, bool fourier_path) {
    if (o.eps_grid.empty()) return fourier_path ? fourier_grid() : canonical_grid();
    std::vector<std::string> fields = split(o.eps_grid, ':');
    if (fields.size() != 4 || fields[0] != "geom") {
        throw Error(Error::Kind::InvalidInput, "--eps-grid expects geom:<start>:<stop>:<count>");
    }
    double start = std::stod(fields[1]);
    double stop = std::stod(fields[2]);
    int count = std::stoi(fields[3]);
    if (count < 2 || !(start > stop) || !(start < 1.0) || !(stop > 0.0)) {
        throw Error(Error::Kind::InvalidInput, "bad geometric grid parameters");
    }
    double ratio = std::pow(stop / start, 1.0 / (count - 1));
    int tail = std::max(2, std::min(count, std::max(8, count / 2)));
    return EpsGrid::geometric(start, ratio, count, tail);
}

TestParams params_from(const CommonOpts& o) {
    TestParams p = canonical_params();
    if (o.m_max > 0) p.m_max = o.m_max;
    if (o.k_max > 0) p.k_max = o.k_max;
    if (o.n_max > 0) p.n_max = o.n_max;
    return p;
}

ClassificationReport bundle(const std::string& family, std::vector<ClassificationReport> reps) {
    ClassificationReport top;
    top.test_name = "report";
    top.family = family;
    top.verdict = Verdict::Pass;
    for (auto& r : reps) {
        if (r.verdict == Verdict::Fail) top.verdict = Verdict::Fail;
        top.subreports.push_back(std::move(r));
    }
    return top;
}

void write_outputs(const CommonOpts& o, const ClassificationReport& rep) {
    if (!o.json_path.empty()) {
        std::ofstream out(o.json_path);
        out << report_to_json(rep) << "\n";
    }
    if (!o.csv_path.empty()) {
        std::ofstream out(o.csv_path);
        out << sweep_to_csv(rep);
    }
}

int verdict_exit(const std::vector<ClassificationReport>& reports,
                 const std::optional<std::map<std::string, Verdict>>& expected) {
    bool any_inconclusive = false;
    bool any_mismatch = false;
    for (const ClassificationReport& r : reports) {
        if (r.verdict == Verdict::Inconclusive) {
            any_inconclusive = true;
            continue;
        }
        Verdict want = Verdict::Pass;
        if (expected) {
            auto it = expected->find(r.test_name);
            if (it != expected->end()) want = it->second;
        }
        if (r.verdict != want) any_mismatch = true;
    }
    if (any_mismatch) return kExitMismatch;
    if (any_inconclusive) return kExitInconclusive;
    return kExitOk;
}

void print_report_line(const ClassificationReport& r) {
    std::cout << r.family << "  " << r.test_name << "  " << to_string(r.verdict);
    size_t shown = 0;
    for (const auto& [k, v] : r.witnesses) {
        std::cout << "  " << k << "=" << v;
        if (++shown >= 4) break;
    }
    std::cout << "\n";
}

int cmd_classify(const CommonOpts& o) {
    LoadedFamily lf = load_family(o);
    TestParams p = params_from(o);
    EpsGrid grid = grid_from(o, false);
    std::vector<std::string> tests =
        o.tests_csv.empty()
            ? std::vector<std::string>{"moderate", "tau", "schwartz", "slowscale-support"}
            : split(o.tests_csv, ',');
    std::vector<ClassificationReport> reports;
    std::optional<ClassificationReport> moderate;
    std::optional<AkSequence> origin_seq;
    auto seq_at_origin = [&]() -> const AkSequence& {
        if (!origin_seq) {
            origin_seq = ak_sequence(lf.family, PointNet::constant(0.0), p.k_max,
                                     p.radius_schedule, p, grid);
        }
        return *origin_seq;
    };
    for (const std::string& t : tests) {
        if (t == "moderate") {
            reports.push_back(test_moderate(lf.family, p, grid));
            moderate = reports.back();
        } else if (t == "negligible") {
            if (!moderate) moderate = test_moderate(lf.family, p, grid);
            reports.push_back(test_negligible(lf.family, p, grid, *moderate));
        } else if (t == "tau") {
            reports.push_back(test_tau(lf.family, p, grid));
        } else if (t == "schwartz") {
            reports.push_back(test_schwartz(lf.family, p, grid));
        } else if (t == "slowscale-support") {
            reports.push_back(test_slowscale_support(lf.family, p, grid));
        } else if (t == "invertible") {
            reports.push_back(test_invertible(lf.family, p, grid));
        } else if (t == "pointstar") {
            reports.push_back(test_pointstar_regular(seq_at_origin(), p));
        } else if (t == "classical") {
            reports.push_back(test_classical_regular(seq_at_origin(), p));
        } else if (t == "convexity") {
            reports.push_back(test_convexity(seq_at_origin(), p));
        } else if (t == "regularity-suite") {
            if (lf.family.name() != "example510") {
                throw Error(Error::Kind::InvalidInput,
                            "regularity-suite runs on the builtin example510");
            }
            TestParams pr = p;
            pr.k_max = std::max(p.k_max, 8);
            reports.push_back(verify_example_510({}, pr, 3));
        } else {
            throw Error(Error::Kind::InvalidInput, "unknown test: " + t);
        }
    }
    for (const ClassificationReport& r : reports) print_report_line(r);
    write_outputs(o, bundle(lf.family.name(), reports));
    return verdict_exit(reports, lf.expected);
}

int cmd_spectrum(const CommonOpts& o) {
    LoadedFamily lf = load_family(o);
    if (lf.family.dim() != 1) throw Error(Error::Kind::InvalidInput, "the spectrum path is 1-d");
    TestParams p = params_from(o);
    EpsGrid grid = grid_from(o, true);
    std::vector<std::string> tests =
        o.tests_csv.empty() ? std::vector<std::string>{"slowscale-spectrum", "gs-infinity"}
                            : split(o.tests_csv, ',');
    std::vector<ClassificationReport> reports;
    for (const std::string& t : tests) {
        if (t == "slowscale-spectrum") {
            reports.push_back(test_slowscale_spectrum(lf.family, p, grid));
        } else if (t == "gs-infinity") {
            reports.push_back(test_gs_infinity(lf.family, p, grid));
        } else if (t == "tempered-equality") {
            reports.push_back(test_tempered_equality(lf.family, p, grid));
        } else {
            throw Error(Error::Kind::InvalidInput, "unknown spectrum test: " + t);
        }
    }
    for (const ClassificationReport& r : reports) print_report_line(r);
    if (!o.csv_path.empty()) {
        std::ofstream out(o.csv_path);
        out << "eps,xi,re,im,abs\n";
        out.precision(17);
        for (double eps : grid.eps()) {
            SpectrumSample s = dft_family_auto(lf.family, eps);
            for (size_t i = 0; i < s.xi.size(); ++i) {
                out << eps << ',' << s.xi[i] << ',' << s.values[i].real() << ','
                    << s.values[i].imag() << ',' << std::abs(s.values[i]) << "\n";
            }
        }
    }
    if (!o.json_path.empty()) {
        std::ofstream out(o.json_path);
        out << report_to_json(bundle(lf.family.name(), reports)) << "\n";
    }
    return verdict_exit(reports, lf.expected);
}

int cmd_verify(const CommonOpts& o) {
    AcceptanceOptions opts;
    opts.quick = o.quick;
    AcceptanceSummary summary = run_acceptance(opts, std::cout);
    if (!o.json_path.empty()) {
        std::ofstream out(o.json_path);
        out << acceptance_to_json(summary) << "\n";
    }
    return summary.all_pass ? kExitOk : kExitMismatch;
}

int cmd_parse(const CommonOpts& o, const std::string& expr_text) {
    if (!expr_text.empty()) {
        std::cout << print(parse(expr_text)) << "\n";
        return kExitOk;
    }
    if (o.family_path.empty()) {
        throw Error(Error::Kind::InvalidInput, "parse needs --family or an inline expression");
    }
    FamilyFile f = load_family_file(o.family_path);
    std::cout << "dim = " << f.dim << "\n";
    if (!f.name.empty()) std::cout << "name = " << f.name << "\n";
    std::cout << "u = " << print(f.u) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized-function asymptotics toolkit"};
    app.require_subcommand(1);

    CommonOpts classify_opts, spectrum_opts, verify_opts, parse_opts;
    std::string parse_expr;

    CLI::App* classify = app.add_subcommand("classify", "growth and regularity tests");
    add_common(classify, classify_opts);
    CLI::App* spectrum = app.add_subcommand("spectrum", "Fourier-side tests");
    add_common(spectrum, spectrum_opts);
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance battery");
    verify->add_option("--json", verify_opts.json_path, "write the summary JSON here");
    verify->add_flag("--quick", verify_opts.quick, "sub-minute subset");
    CLI::App* parse_cmd = app.add_subcommand("parse", "check and print a family definition");
    parse_cmd->add_option("--family", parse_opts.family_path, "family definition file");
    parse_cmd->add_option("expression", parse_expr, "inline expression");

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) return cmd_classify(classify_opts);
        if (spectrum->parsed()) return cmd_spectrum(spectrum_opts);
        if (verify->parsed()) return cmd_verify(verify_opts);
        if (parse_cmd->parsed()) return cmd_parse(parse_opts, parse_expr);
    } catch (const gfa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case gfa::Error::Kind::Budget:
            case gfa::Error::Kind::Aliasing: return kExitInconclusive;
            default: return kExitUsage;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
