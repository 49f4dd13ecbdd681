#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drs/report.hpp"

namespace drs {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    json detail;
    double seconds = 0.0;  ///< wall time; kept out of the deterministic report
};

struct AcceptanceOptions {
    std::uint64_t seed = 20170101;
};

/// Runs the property and oracle suites (criteria 1–9). Criterion 10
/// (run-to-run determinism) is evaluated by comparing two reports.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// Deterministic JSON view of a run: no timing information.
json acceptance_report(const std::vector<CriterionResult>& results);

/// Criterion 10: two reports from the same seed must be byte-identical.
CriterionResult determinism_criterion(const json& first, const json& second);

}  // namespace drs
