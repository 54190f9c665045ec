// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_ERRORS_HPP_
#define RRSIR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rrsir {

struct BranchFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularDerivative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IllConditioned : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeVariance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroSignature : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroReceiver : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct XNotSpread : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateVariance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PredictionUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Krylov sequence degenerated before reaching the requested stage count.
/// Carries the effective rank so callers can retry or accept saturation.
struct DegenerateKrylov : std::runtime_error {
    int effective_rank;
    DegenerateKrylov(const std::string& msg, int rank)
        : std::runtime_error(msg), effective_rank(rank) {}
};

}  // namespace rrsir

#endif  // RRSIR_ERRORS_HPP_
