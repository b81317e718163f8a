#include "gfa/report_json.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <sstream>

namespace gfa {

const char* kArtifactVersion = "0.1.0";

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        default: return "Inconclusive";
    }
}

TestParams::TestParams() {
    for (int j = 2; j <= 10; ++j) radius_schedule.push_back(std::exp2(-j));
}

std::string describe_grid(const EpsGrid& g) {
    std::ostringstream os;
    os << "eps[" << g.eps().front() << ".." << g.eps().back() << "]x" << g.size() << ",tail"
       << g.tail_size() << (g.geometric_spacing() ? ",geometric" : ",explicit");
    return os.str();
}

void ClassificationReport::record_params(const TestParams& p, const EpsGrid& grid) {
    params.emplace_back("m_max", p.m_max);
    params.emplace_back("k_max", p.k_max);
    params.emplace_back("n_max", p.n_max);
    params.emplace_back("decay_max", p.decay_max);
    params.emplace_back("moment_max", p.moment_max);
    params.emplace_back("exp_tol", p.exp_tol);
    params.emplace_back("resid_tol", p.resid_tol);
    params.emplace_back("growth_tol", p.growth_tol);
    params.emplace_back("n_sharp_max", p.n_sharp_max);
    params.emplace_back("base_points", p.sample.base_points);
    params.emplace_back("refine_rounds", p.sample.refine_rounds);
    grid_desc = describe_grid(grid);
}

namespace {

using ordered_json = nlohmann::ordered_json;

double sanitize(double v) {
    if (std::isnan(v)) return 0.0;
    if (v == kInf) return 1e308;
    if (v == -kInf) return -1e308;
    return v;
}

ordered_json report_to_json_obj(const ClassificationReport& r) {
    ordered_json j;
    j["family"] = r.family;
    j["test"] = r.test_name;
    j["verdict"] = to_string(r.verdict);
    ordered_json w = ordered_json::object();
    for (const auto& [k, v] : r.witnesses) w[k] = sanitize(v);
    j["witnesses"] = w;
    ordered_json d = ordered_json::object();
    for (const auto& [k, v] : r.notes) d[k] = v;
    j["diagnostics"] = d;
    ordered_json p = ordered_json::object();
    for (const auto& [k, v] : r.params) p[k] = sanitize(v);
    if (!r.grid_desc.empty()) p["grid"] = r.grid_desc;
    j["params"] = p;
    j["version"] = kArtifactVersion;
    if (!r.subreports.empty()) {
        ordered_json subs = ordered_json::array();
        for (const auto& s : r.subreports) subs.push_back(report_to_json_obj(s));
        j["subreports"] = subs;
    }
    return j;
}

}  // namespace

std::string report_to_json(const ClassificationReport& r, int indent) {
    return report_to_json_obj(r).dump(indent);
}

std::string sweep_to_csv(const ClassificationReport& r) {
    std::ostringstream os;
    os << "eps,region,alpha,m_or_k,sup_logmag,fit_slope,residual\n";
    os.precision(17);
    std::function<void(const ClassificationReport&)> emit =
        [&](const ClassificationReport& rep) {
            for (const SweepRow& row : rep.sweep) {
                os << row.eps << ',' << row.region << ',' << row.alpha << ',' << row.m_or_k
                   << ',' << sanitize(row.sup_logmag) << ',' << sanitize(row.fit_slope) << ','
                   << sanitize(row.residual) << '\n';
            }
            for (const auto& s : rep.subreports) emit(s);
        };
    emit(r);
    return os.str();
}

}  // namespace gfa
