#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gfa/scalar.hpp"

namespace gfa {

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);

/// One row of the (eps, region, alpha, m_or_k, sup, slope, residual) sweep
/// behind a verdict; flat for CSV plotting.
struct SweepRow {
    double eps = 0.0;
    std::string region;
    std::string alpha;
    double m_or_k = 0.0;
    double sup_logmag = 0.0;
    double fit_slope = 0.0;
    double residual = 0.0;
};

/// Region-sampling configuration for sup/inf sweeps.
struct SampleParams {
    int base_points = 4097;
    int refine_rounds = 3;
    int refine_points = 129;
    int focus_points = 257;
    int octave_points = 129;
};

/// Every universally quantified condition is tested over these finite ranges;
/// reports embed them, verdicts are "up to tested range".
struct TestParams {
    int m_max = 4;
    int k_max = 8;
    double n_max = 8.0;
    int decay_max = 8;
    int moment_max = 8;
    double exp_tol = 0.1;
    double resid_tol = 0.5;
    double growth_tol = 0.5;
    int n_sharp_max = 6;
    double exterior_truncation_m = 4.0;
    double ak_converge_tol = 0.1;
    double convexity_tol = 0.15;
    double drop_tol = 0.1;
    std::vector<double> radius_schedule;  // default 2^-2 .. 2^-10
    SampleParams sample;

    TestParams();
};

/// Structured verdict with witnesses and diagnostics. Pass/Fail always carry
/// a deciding witness; Inconclusive carries the residual that exceeded
/// tolerance.
struct ClassificationReport {
    std::string test_name;
    std::string family;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::pair<std::string, double>> witnesses;
    std::vector<std::pair<std::string, std::string>> notes;
    std::vector<SweepRow> sweep;
    std::vector<ClassificationReport> subreports;
    std::vector<std::pair<std::string, double>> params;
    std::string grid_desc;

    ClassificationReport& witness(const std::string& k, double v) {
        witnesses.emplace_back(k, v);
        return *this;
    }
    ClassificationReport& note(const std::string& k, const std::string& v) {
        notes.emplace_back(k, v);
        return *this;
    }
    double witness_value(const std::string& k, double fallback = 0.0) const {
        for (const auto& [key, v] : witnesses) {
            if (key == k) return v;
        }
        return fallback;
    }
    void record_params(const TestParams& p, const EpsGrid& grid);
};

std::string describe_grid(const EpsGrid& g);

}  // namespace gfa
