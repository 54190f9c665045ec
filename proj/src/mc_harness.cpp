// SPDX-License-Identifier: Apache-2.0

#include "rrsir/mc_harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rrsir/errors.hpp"
#include "rrsir/receivers.hpp"
#include "rrsir/spectral.hpp"

namespace rrsir {

namespace {

double normal_cdf(double x) {
    // Phi via erfc; |error| ~ machine epsilon, far below the 1e-7 contract.
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

Eigen::VectorXcd eigenvector_probe(const ExperimentConfig& cfg, std::uint64_t trial) {
    const int n = cfg.N;
    if (cfg.x_choice == "uniform")
        return Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    if (cfg.x_choice == "e1") {
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
        x(0) = 1.0;
        return x;
    }
    if (cfg.x_choice == "random") {
        // Complex-Gaussian direction from the auxiliary stream (tag 1);
        // spread holds with overwhelming probability at these sizes.
        const RngStream stream(cfg.seed, trial);
        EntryDist cg{EntryKind::ComplexGaussian};
        Eigen::VectorXcd x(n);
        for (int i = 0; i < n; ++i) {
            const auto u = stream.uniform_pair(static_cast<std::uint32_t>(i), 0u, 1u);
            const double r = std::sqrt(-std::log(u[0]));
            const double t = 2.0 * std::numbers::pi * u[1];
            x(i) = std::complex<double>(r * std::cos(t), r * std::sin(t));
        }
        (void)cg;
        return x / x.norm();
    }
    throw std::invalid_argument("unknown x_choice: " + cfg.x_choice);
}

TrialSummary summarize(const std::vector<double>& values, const CltPrediction& pred) {
    TrialSummary s;
    const MomentAccumulator acc = pairwise_moments(values);
    s.n = acc.n;
    s.mean = acc.mean;
    s.theory_mean = pred.mean;
    s.theory_var = pred.variance;
    if (acc.n >= 2) {
        s.variance = acc.variance();
        s.variance_defined = true;
        s.se_mean = std::sqrt(s.variance / acc.n);
        s.se_var = s.variance * std::sqrt(2.0 / (acc.n - 1));
        s.z_mean = s.se_mean > 0.0
                       ? (s.mean - s.theory_mean) / s.se_mean
                       : (s.mean == s.theory_mean ? 0.0 : std::numeric_limits<double>::infinity());
        s.var_ratio = s.theory_var > 0.0 ? s.variance / s.theory_var
                                         : std::numeric_limits<double>::quiet_NaN();
        if (s.variance > 0.0) {
            s.ks_distance = ks_distance(values, s.mean, s.variance);
            s.ks_defined = true;
        }
        s.mean_ok = std::abs(s.z_mean) < 4.0;
        s.var_ok = s.theory_var > 0.0 && s.var_ratio >= 0.85 && s.var_ratio <= 1.15;
    } else {
        s.variance = std::numeric_limits<double>::quiet_NaN();
        s.z_mean = std::numeric_limits<double>::quiet_NaN();
        s.var_ratio = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (N < 1 || K < 1) throw std::invalid_argument("config: N, K must be >= 1");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (sigma2 < 0.0) throw std::invalid_argument("config: sigma2 must be >= 0");
    if (m < 1) throw std::invalid_argument("config: m must be >= 1");
    if (degree < 1) throw std::invalid_argument("config: degree must be >= 1");
    if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
    if (x_choice != "uniform" && x_choice != "random" && x_choice != "e1")
        throw std::invalid_argument("config: x_choice must be uniform, random or e1");
}

void MomentAccumulator::push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.n == 0) return;
    if (n == 0) {
        *this = other;
        return;
    }
    const double delta = other.mean - mean;
    const long total = n + other.n;
    m2 += other.m2 + delta * delta * (static_cast<double>(n) * other.n / total);
    mean += delta * other.n / total;
    n = total;
}

double MomentAccumulator::variance() const {
    return n >= 2 ? m2 / (n - 1) : std::numeric_limits<double>::quiet_NaN();
}

MomentAccumulator pairwise_moments(const std::vector<double>& values) {
    // Fixed binary reduction over trial indices, independent of thread count.
    std::function<MomentAccumulator(std::size_t, std::size_t)> reduce =
        [&](std::size_t lo, std::size_t hi) {
            MomentAccumulator acc;
            if (hi - lo <= 64) {
                for (std::size_t i = lo; i < hi; ++i) acc.push(values[i]);
                return acc;
            }
            const std::size_t mid = lo + (hi - lo) / 2;
            acc = reduce(lo, mid);
            acc.merge(reduce(mid, hi));
            return acc;
        };
    return reduce(0, values.size());
}

double ks_distance(const std::vector<double>& samples, double mean, double variance) {
    if (!(variance > 0.0))
        throw DegenerateVariance("ks_distance: variance must be positive");
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
    const double sd = std::sqrt(variance);
    std::vector<double> z(samples.size());
    std::transform(samples.begin(), samples.end(), z.begin(),
                   [&](double x) { return (x - mean) / sd; });
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double phi = normal_cdf(z[i]);
        d = std::max(d, std::max(std::abs((i + 1) / n - phi), std::abs(i / n - phi)));
    }
    return d;
}

CltPrediction prediction_for(const ExperimentConfig& cfg) {
    cfg.validate();
    const double cn = cfg.ratio();
    const double e4 = cfg.dist.fourth_moment();
    const Realness realness =
        cfg.dist.is_complex() ? Realness::ComplexEntries : Realness::RealEntries;
    switch (cfg.statistic) {
        case StatisticKind::MswSir:
            if (!cfg.dist.is_complex())
                throw PredictionUnavailable(
                    "msw-sir limit law assumes complex entries with E v^2 = 0");
            return msw_fluct_prediction(cfg.m, cn, cfg.sigma2, e4);
        case StatisticKind::MfSum: {
            if (!cfg.dist.is_complex())
                throw PredictionUnavailable(
                    "mf-sum limit law assumes complex entries with E v^2 = 0");
            CltPrediction p;
            p.statistic = StatisticKind::MfSum;
            p.mean = mf_sum_mean(cn, cfg.sigma2, e4);
            p.variance = mf_sum_variance(cn, cfg.sigma2, e4);
            p.provenance = "mf sir-sum limit";
            return p;
        }
        case StatisticKind::MfMi:
            if (!cfg.dist.is_complex())
                throw PredictionUnavailable(
                    "mf-mi limit law assumes complex entries with E v^2 = 0");
            return mf_mi_params(cn, cfg.sigma2, e4);
        case StatisticKind::LssEig:
            return lss_prediction({cfg.degree}, cn, e4, realness);
        case StatisticKind::LssVec: {
            CltPrediction p;
            p.statistic = StatisticKind::LssVec;
            p.mean = 0.0;
            p.variance = eigvec_lss_covariance(cfg.degree, cfg.degree, cn, realness);
            p.provenance = "eigenvector lss limit";
            return p;
        }
    }
    throw PredictionUnavailable("unknown statistic");
}

double evaluate_trial(const ExperimentConfig& cfg, std::uint64_t trial) {
    const Ensemble e = sample_ensemble(cfg.N, cfg.K, cfg.dist, cfg.seed, trial);
    switch (cfg.statistic) {
        case StatisticKind::MswSir: return msw_fluctuation(e, 0, cfg.m, cfg.sigma2);
        case StatisticKind::MfSum: return mf_sum_statistic(e, cfg.sigma2);
        case StatisticKind::MfMi: return mf_mi_statistic(e, cfg.sigma2);
        case StatisticKind::LssEig: return lss_eigenvalue(e, cfg.degree);
        case StatisticKind::LssVec:
            return lss_eigenvector(e, eigenvector_probe(cfg, trial), cfg.degree);
    }
    throw std::invalid_argument("unknown statistic");
}

namespace {

ExperimentResult run_impl(const ExperimentConfig& cfg, bool parallel) {
    cfg.validate();
    ExperimentResult result;
    result.cfg = cfg;
    result.prediction = prediction_for(cfg);
    result.values.assign(cfg.trials, 0.0);

    std::string first_error;
    long failed_trial = -1;
    if (parallel) {
        const int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
        for (int t = 0; t < cfg.trials; ++t) {
            try {
                result.values[t] = evaluate_trial(cfg, static_cast<std::uint64_t>(t));
            } catch (const std::exception& ex) {
#pragma omp critical
                if (failed_trial < 0 || t < failed_trial) {
                    failed_trial = t;
                    first_error = ex.what();
                }
            }
        }
    } else {
        for (int t = 0; t < cfg.trials; ++t) {
            try {
                result.values[t] = evaluate_trial(cfg, static_cast<std::uint64_t>(t));
            } catch (const std::exception& ex) {
                failed_trial = t;
                first_error = ex.what();
                break;
            }
        }
    }
    if (failed_trial >= 0)
        throw std::runtime_error("experiment failed at (seed=" + std::to_string(cfg.seed) +
                                 ", trial=" + std::to_string(failed_trial) + "): " + first_error);

    result.summary = summarize(result.values, result.prediction);
    return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return run_impl(cfg, true); }

ExperimentResult run_experiment_serial(const ExperimentConfig& cfg) {
    ExperimentResult result = run_impl(cfg, false);
    // Reference single-pass accumulation; the pairwise summary must agree.
    MomentAccumulator acc;
    for (const double v : result.values) acc.push(v);
    result.summary.mean = acc.mean;
    if (acc.n >= 2) result.summary.variance = acc.variance();
    return result;
}

}  // namespace rrsir
