// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite driver: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion (details indented underneath).

#include <cstring>
#include <iostream>

#include "rrsir/acceptance.hpp"
#include "rrsir/records.hpp"

int main(int argc, char** argv) {
    rrsir::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) opts.only = argv[++i];
        if (std::strcmp(argv[i], "--inject-fault") == 0) opts.inject_fault = true;
    }

    const auto results = rrsir::run_acceptance(opts);
    bool all_ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  ("
                  << rrsir::format_double(r.seconds) << " s)\n"
                  << r.detail;
        all_ok = all_ok && r.passed;
    }
    std::cout << (all_ok ? "acceptance PASSED" : "acceptance FAILED") << " (" << results.size()
              << " criteria)\n";
    return all_ok ? 0 : 3;
}
