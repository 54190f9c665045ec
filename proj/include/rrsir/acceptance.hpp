// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_ACCEPTANCE_HPP_
#define RRSIR_ACCEPTANCE_HPP_

#include <string>
#include <vector>

namespace rrsir {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;       // measured vs target, one line per sub-check
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::string only;          // run only criteria whose name contains this
    bool inject_fault = false; // test mode: corrupt a moment table copy
    int threads = 0;
};

/// Runs the acceptance criteria (exact identities, closed-form vs contour
/// cross-checks, and seeded Monte Carlo comparisons at their stated
/// tolerances).  Each criterion reports pass/fail with measured values.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

}  // namespace rrsir

#endif  // RRSIR_ACCEPTANCE_HPP_
