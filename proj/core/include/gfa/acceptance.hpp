#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gfa {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceSummary {
    std::vector<CriterionResult> rows;
    bool all_pass = false;
    double total_seconds = 0.0;
};

struct AcceptanceOptions {
    /// Sub-minute subset: exact-layer properties, the estimator, the grammar
    /// corpus and one family per class.
    bool quick = false;
};

/// Runs the verification battery, printing one pass/fail line per criterion.
/// Deterministic: fixed seeds, no wall-clock dependence in any verdict except
/// the runtime budget rows.
AcceptanceSummary run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

std::string acceptance_to_json(const AcceptanceSummary& summary);

}  // namespace gfa
