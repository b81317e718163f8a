#pragma once

#include <string>

#include "gfa/report.hpp"

namespace gfa {

/// Deterministic JSON form of a report: top-level
/// {family, test, verdict, witnesses{}, diagnostics{}, params{}, version};
/// identical inputs serialize byte-identically.
std::string report_to_json(const ClassificationReport& r, int indent = 2);

/// Flat CSV rows: eps, region, alpha, m_or_k, sup_logmag, fit_slope, residual.
std::string sweep_to_csv(const ClassificationReport& r);

extern const char* kArtifactVersion;

}  // namespace gfa
