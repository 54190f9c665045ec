// SPDX-License-Identifier: Apache-2.0

#ifndef RRSIR_MC_HARNESS_HPP_
#define RRSIR_MC_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrsir/clt_formulas.hpp"
#include "rrsir/model.hpp"

namespace rrsir {

struct ExperimentConfig {
    StatisticKind statistic = StatisticKind::MfSum;
    int N = 400;
    int K = 400;
    double sigma2 = 1.0;
    int m = 1;       // MSW stage count
    int degree = 1;  // LSS monomial degree
    EntryDist dist;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::string x_choice = "uniform";  // eigenvector experiments: uniform | random
    int threads = 0;                   // 0 = library default

    double ratio() const { return static_cast<double>(N) / K; }
    void validate() const;
};

struct TrialSummary {
    long n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased; NaN sentinel when n < 2
    double se_mean = 0.0;
    double se_var = 0.0;
    double theory_mean = 0.0;
    double theory_var = 0.0;
    double z_mean = 0.0;
    double var_ratio = 0.0;
    double ks_distance = 0.0;
    bool variance_defined = false;     // n >= 2
    bool ks_defined = false;           // theory_var > 0
    bool mean_ok = false;              // |z_mean| < 4
    bool var_ok = false;               // var_ratio in [0.85, 1.15]
};

struct ExperimentResult {
    ExperimentConfig cfg;
    CltPrediction prediction;
    std::vector<double> values;  // indexed by trial
    TrialSummary summary;
};

/// Streaming (count, mean, M2) moments with an order-independent merge.
struct MomentAccumulator {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x);
    void merge(const MomentAccumulator& other);
    double variance() const;  // unbiased
};

/// Deterministic pairwise reduction over trial-indexed values; the merge tree
/// depends only on the value count, never on thread scheduling.
MomentAccumulator pairwise_moments(const std::vector<double>& values);

/// Sup-distance between the empirical CDF of standardized samples and the
/// standard normal CDF (Phi via erfc, |error| ~ 1e-16, well under 1e-7).
/// Throws DegenerateVariance when variance <= 0.
double ks_distance(const std::vector<double>& samples, double mean, double variance);

/// Theoretical prediction matching the configured statistic.  Throws
/// PredictionUnavailable for unsupported (statistic, distribution) pairs,
/// e.g. real entry kinds for the receiver statistics, whose limit laws
/// assume E v^2 = 0.
CltPrediction prediction_for(const ExperimentConfig& cfg);

/// One statistic value for a single trial (pure function of cfg and trial).
double evaluate_trial(const ExperimentConfig& cfg, std::uint64_t trial);

/// Runs cfg.trials independent trials with counter-based per-trial seeds and
/// OpenMP worker parallelism; per-trial values land in a trial-indexed array
/// and the summary uses the deterministic pairwise merge, so results are
/// identical for any worker count.  Numeric failures abort with the trial
/// index attached.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Plain single-pass serial reference (Welford accumulation), kept for
/// validating the parallel path.
ExperimentResult run_experiment_serial(const ExperimentConfig& cfg);

}  // namespace rrsir

#endif  // RRSIR_MC_HARNESS_HPP_
