// SPDX-License-Identifier: Apache-2.0
//
// Compares the serial reference trial runner against the OpenMP one and
// checks that both produce bit-identical per-trial values.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "rrsir/mc_harness.hpp"

int main(int argc, char** argv) {
    using namespace rrsir;
    ExperimentConfig cfg;
    cfg.statistic = StatisticKind::MfSum;
    cfg.N = cfg.K = argc > 1 ? std::atoi(argv[1]) : 256;
    cfg.trials = argc > 2 ? std::atoi(argv[2]) : 200;
    cfg.seed = 42;
    cfg.dist = EntryDist{EntryKind::ComplexGaussian};

    const auto time_run = [&](auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        ExperimentResult r = fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::make_pair(std::move(r), dt);
    };

    std::printf("mf-sum N=K=%d, %d trials\n", cfg.N, cfg.trials);
    auto [serial, t_serial] = time_run([&] { return run_experiment_serial(cfg); });
    std::printf("%-18s %8.2f s   %8.1f trials/s\n", "serial reference", t_serial,
                cfg.trials / t_serial);

    for (const int nt : {1, 2, omp_get_max_threads()}) {
        cfg.threads = nt;
        auto [par, t_par] = time_run([&] { return run_experiment(cfg); });
        bool identical = true;
        for (int t = 0; t < cfg.trials; ++t)
            identical = identical && par.values[t] == serial.values[t];
        std::printf("omp %2d threads     %8.2f s   %8.1f trials/s   speedup %.2fx   %s\n", nt,
                    t_par, cfg.trials / t_par, t_serial / t_par,
                    identical ? "bit-identical" : "MISMATCH");
        if (!identical) return 1;
    }
    return 0;
}
