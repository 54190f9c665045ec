// SPDX-License-Identifier: Apache-2.0
//
// rrsir: theory queries, seeded Monte Carlo experiments and the acceptance
// verification suite for reduced-rank receiver SIR asymptotics.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
// 3 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "rrsir/acceptance.hpp"
#include "rrsir/clt_formulas.hpp"
#include "rrsir/errors.hpp"
#include "rrsir/mc_harness.hpp"
#include "rrsir/records.hpp"

namespace {

int env_threads() {
    if (const char* v = std::getenv("RRSIR_THREADS")) {
        try {
            return std::max(0, std::stoi(v));
        } catch (...) {
            return 0;
        }
    }
    return 0;
}

int cmd_limits(double c, double sigma2, int m_max) {
    rrsir::MomentTable table = rrsir::MomentTable::build(c, sigma2, 2 * m_max - 1);
    std::cout << "# shifted moments a_m, c=" << rrsir::format_double(c)
              << " sigma2=" << rrsir::format_double(sigma2) << "\n";
    for (int m = 1; m <= 2 * m_max - 1; ++m)
        std::cout << "a_" << m << " = " << rrsir::format_double(table.a[m]) << "\n";
    const double bound = rrsir::mmse_limit(c, sigma2);
    double prev = 0.0;
    std::cout << "# multistage SIR limits\n";
    for (int m = 1; m <= m_max; ++m) {
        try {
            const double sir = rrsir::hankel_system(m, c, sigma2).sir_limit;
            std::cout << "sir_limit(m=" << m << ") = " << rrsir::format_double(sir)
                      << (sir > prev ? "  (increasing)" : "  (NOT increasing)") << "\n";
            prev = sir;
        } catch (const rrsir::IllConditioned& ex) {
            std::cout << "sir_limit(m=" << m << ") = ill-conditioned (" << ex.what() << ")\n";
        }
    }
    std::cout << "mmse_limit = " << rrsir::format_double(bound) << "\n";
    return 0;
}

int cmd_predict(const std::string& statistic, double c, double sigma2, const std::string& dist,
                int m, int degree) {
    rrsir::ExperimentConfig cfg;
    cfg.statistic = rrsir::statistic_from_name(statistic);
    // Prediction engines take the ratio directly; N/K only set the echo.
    cfg.N = cfg.K = 1000;
    cfg.N = static_cast<int>(1000 * c);
    cfg.sigma2 = sigma2;
    cfg.dist = rrsir::EntryDist::from_name(dist);
    cfg.m = m;
    cfg.degree = degree;
    cfg.trials = 1;
    const double cn = c;
    const double e4 = cfg.dist.fourth_moment();
    rrsir::CltPrediction pred;
    switch (cfg.statistic) {
        case rrsir::StatisticKind::MswSir:
            pred = rrsir::msw_fluct_prediction(m, cn, sigma2, e4);
            break;
        case rrsir::StatisticKind::MfSum:
            pred.statistic = cfg.statistic;
            pred.mean = rrsir::mf_sum_mean(cn, sigma2, e4);
            pred.variance = rrsir::mf_sum_variance(cn, sigma2, e4);
            pred.provenance = "mf sir-sum limit";
            break;
        case rrsir::StatisticKind::MfMi:
            pred = rrsir::mf_mi_params(cn, sigma2, e4);
            break;
        case rrsir::StatisticKind::LssEig:
            pred = rrsir::lss_prediction({degree}, cn, e4,
                                         cfg.dist.is_complex() ? rrsir::Realness::ComplexEntries
                                                               : rrsir::Realness::RealEntries);
            break;
        case rrsir::StatisticKind::LssVec:
            pred.statistic = cfg.statistic;
            pred.mean = 0.0;
            pred.variance = rrsir::eigvec_lss_covariance(
                degree, degree, cn,
                cfg.dist.is_complex() ? rrsir::Realness::ComplexEntries
                                      : rrsir::Realness::RealEntries);
            pred.provenance = "eigenvector lss limit";
            break;
    }
    if (!cfg.dist.is_complex() &&
        (cfg.statistic == rrsir::StatisticKind::MswSir ||
         cfg.statistic == rrsir::StatisticKind::MfSum ||
         cfg.statistic == rrsir::StatisticKind::MfMi))
        throw rrsir::PredictionUnavailable("receiver limit laws assume complex entries");
    std::cout << "statistic = " << statistic << "\n"
              << "mean      = " << rrsir::format_double(pred.mean) << "\n"
              << "variance  = " << rrsir::format_double(pred.variance) << "\n"
              << "basis     = " << pred.provenance << "\n";
    if (cfg.statistic == rrsir::StatisticKind::MfSum)
        std::cout << "mean (direct expansion) = "
                  << rrsir::format_double(rrsir::mf_sum_mean_direct(cn, sigma2)) << "\n";
    if (cfg.statistic == rrsir::StatisticKind::MfMi)
        std::cout << "mean (direct expansion) = "
                  << rrsir::format_double(rrsir::mf_mi_mean_direct(cn, sigma2, e4)) << "\n";
    if (pred.variance == 0.0) std::cout << "note: degenerate case, statistic is constant\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, int threads,
                 int hist_bins) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot open config: " << config_path << "\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    rrsir::ExperimentConfig cfg;
    try {
        cfg = rrsir::parse_config(buf.str());
    } catch (const std::exception& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    }
    if (threads >= 0) cfg.threads = threads;  // --threads wins over the file
    const rrsir::ExperimentResult result = rrsir::run_experiment(cfg);
    const std::string text = rrsir::serialize_run(result);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << text;
    }
    if (hist_bins > 0) {
        const std::string csv = rrsir::histogram_csv(result.values, hist_bins);
        const std::string hist_path =
            out_path.empty() ? "histogram.csv" : out_path + ".hist.csv";
        std::ofstream hout(hist_path, std::ios::binary);
        hout << csv;
    }
    const auto& s = result.summary;
    std::cerr << "n=" << s.n << " mean=" << rrsir::format_double(s.mean)
              << " var=" << rrsir::format_double(s.variance)
              << " z_mean=" << rrsir::format_double(s.z_mean)
              << " var_ratio=" << rrsir::format_double(s.var_ratio)
              << " ks=" << rrsir::format_double(s.ks_distance) << "\n";
    return 0;
}

int cmd_contour(int max_degree, double c) {
    std::cout << "# closed form vs contour quadrature, c = " << rrsir::format_double(c) << "\n";
    for (int r = 1; r <= max_degree; ++r) {
        const double closed = rrsir::lss_mean_correction_closed(r, c);
        const double numeric = rrsir::lss_mean_correction_numeric(r, c);
        std::cout << "mean correction r=" << r << ": closed " << rrsir::format_double(closed)
                  << "  contour " << rrsir::format_double(numeric) << "  |diff| "
                  << rrsir::format_double(std::abs(closed - numeric)) << "\n";
    }
    for (int r1 = 1; r1 <= max_degree; ++r1)
        for (int r2 = r1; r2 <= max_degree; ++r2) {
            const double closed = rrsir::lss_cov_correction_closed(r1, r2, c);
            const double numeric = rrsir::lss_cov_correction_numeric(r1, r2, c);
            std::cout << "cov correction (" << r1 << "," << r2 << "): closed "
                      << rrsir::format_double(closed) << "  contour "
                      << rrsir::format_double(numeric) << "  |diff| "
                      << rrsir::format_double(std::abs(closed - numeric)) << "\n";
        }
    std::cout << "eigvec covariance (1,1) complex = "
              << rrsir::format_double(
                     rrsir::eigvec_lss_covariance(1, 1, c, rrsir::Realness::ComplexEntries))
              << "  (expect c)\n";
    return 0;
}

int cmd_verify(const std::string& only, bool inject_fault, int threads) {
    rrsir::AcceptanceOptions opts;
    opts.only = only;
    opts.inject_fault = inject_fault;
    opts.threads = threads;
    const auto results = rrsir::run_acceptance(opts);
    bool all_ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  ("
                  << rrsir::format_double(r.seconds) << " s)\n"
                  << r.detail;
        all_ok = all_ok && r.passed;
    }
    if (results.empty()) {
        std::cerr << "no criteria matched filter '" << only << "'\n";
        return 1;
    }
    std::cout << (all_ok ? "verification PASSED" : "verification FAILED") << "\n";
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reduced-rank receiver SIR asymptotics: theory engines and Monte Carlo"};
    app.require_subcommand(1);

    double c = 1.0, sigma2 = 1.0;
    int m_max = 3, m = 1, degree = 1, trials = 1000, threads = -1, hist_bins = 0;
    std::string statistic = "mf-sum", dist = "complex-gaussian", out_path, config_path, only;
    bool inject_fault = false;
    (void)trials;

    auto* limits = app.add_subcommand("limits", "deterministic SIR limits and moments");
    limits->add_option("--c", c, "ratio N/K");
    limits->add_option("--sigma2", sigma2, "noise variance");
    limits->add_option("--m-max", m_max, "largest stage count")->check(CLI::PositiveNumber);

    auto* predict = app.add_subcommand("predict", "theoretical mean/variance of a statistic");
    predict->add_option("--statistic", statistic, "msw-sir | mf-sum | mf-mi | lss-eig | lss-vec");
    predict->add_option("--c", c, "ratio N/K");
    predict->add_option("--sigma2", sigma2, "noise variance");
    predict->add_option("--dist", dist, "entry distribution");
    predict->add_option("--m", m, "MSW stage count");
    predict->add_option("--degrees", degree, "LSS monomial degree");

    auto* simulate = app.add_subcommand("simulate", "run a seeded Monte Carlo experiment");
    simulate->add_option("--config", config_path, "JSON config file")->required();
    simulate->add_option("--out", out_path, "output record file (stdout when absent)");
    simulate->add_option("--threads", threads, "worker count (overrides config/env)");
    simulate->add_option("--hist-bins", hist_bins, "also write a histogram CSV");

    auto* contour = app.add_subcommand("contour", "closed forms vs contour quadrature");
    contour->add_option("--c", c, "ratio N/K");
    contour->add_option("--m-max", m_max, "largest monomial degree");

    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->add_option("--only", only, "run only criteria whose name contains this");
    verify->add_option("--threads", threads, "worker count");
    verify->add_flag("--inject-fault", inject_fault,
                     "test mode: corrupt a moment table to force a failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const int effective_threads = threads >= 0 ? threads : env_threads();
    try {
        if (*limits) return cmd_limits(c, sigma2, m_max);
        if (*predict) return cmd_predict(statistic, c, sigma2, dist, m, degree);
        if (*simulate) return cmd_simulate(config_path, out_path, threads, hist_bins);
        if (*contour) return cmd_contour(m_max, c);
        if (*verify) return cmd_verify(only, inject_fault, effective_threads);
    } catch (const rrsir::PredictionUnavailable& ex) {
        std::cerr << "prediction unavailable: " << ex.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 2;
    }
    return 1;
}
