// Copyright 2026 The qpe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP versions, plus a small sweep at 1 and N threads.
//
//   bench_kernels [--quick]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include "qpelab/harness.hpp"
#include "qpelab/kernels.hpp"
#include "qpelab/posterior.hpp"

using namespace qpelab;

namespace {

double seconds_per_call(const std::function<void()>& fn, double min_seconds) {
    using clock = std::chrono::steady_clock;
    fn();
    std::int64_t calls = 0;
    const auto start = clock::now();
    double elapsed = 0.0;
    do {
        fn();
        ++calls;
        elapsed = std::chrono::duration<double>(clock::now() - start).count();
    } while (elapsed < min_seconds);
    return elapsed / static_cast<double>(calls);
}

void report(const char* name, std::int64_t grid, double serial, double parallel) {
    std::printf("%-22s G=%-8lld serial %9.1f us  openmp %9.1f us  speedup %5.2fx\n", name,
                static_cast<long long>(grid), serial * 1e6, parallel * 1e6, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const double min_seconds = quick ? 0.02 : 0.2;
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());

    const NoiseModel noise(0.98, 0.995);
    const Circuit circuit(37, 0.4);
    for (std::int64_t grid : {std::int64_t{1} << 12, std::int64_t{1} << 16, std::int64_t{1} << 20}) {
        const auto table = kernels::HalfAngleTable::for_grid(grid);
        std::vector<double> ls(static_cast<std::size_t>(grid)), lf(ls.size()), in(ls.size(), -1.0), out(ls.size());

        report("fill_log_likelihoods", grid,
               seconds_per_call([&] { kernels::serial::fill_log_likelihoods(*table, circuit, noise, ls, lf); },
                                min_seconds),
               seconds_per_call([&] { kernels::parallel::fill_log_likelihoods(*table, circuit, noise, ls, lf); },
                                min_seconds));
        report("accumulate_record", grid,
               seconds_per_call([&] { kernels::serial::accumulate_record(in, ls, lf, 3.0, 5.0, out); }, min_seconds),
               seconds_per_call([&] { kernels::parallel::accumulate_record(in, ls, lf, 3.0, 5.0, out); },
                                min_seconds));
        report("accumulate_outcome", grid,
               seconds_per_call([&] { kernels::serial::accumulate_outcome(*table, circuit, noise, in, 1.0, 0.0, out); },
                                min_seconds),
               seconds_per_call(
                   [&] { kernels::parallel::accumulate_outcome(*table, circuit, noise, in, 1.0, 0.0, out); },
                   min_seconds));
        volatile double sink = 0.0;
        report("sum_exp_shifted", grid,
               seconds_per_call([&] { sink = kernels::serial::sum_exp_shifted(ls, 0.0); }, min_seconds),
               seconds_per_call([&] { sink = kernels::parallel::sum_exp_shifted(ls, 0.0); }, min_seconds));
        report("max_value", grid, seconds_per_call([&] { sink = kernels::serial::max_value(ls); }, min_seconds),
               seconds_per_call([&] { sink = kernels::parallel::max_value(ls); }, min_seconds));
        (void)sink;
    }

    SweepConfig sweep;
    sweep.strategies = {Strategy::kAdaptive};
    sweep.resource_ladder = {256, 1024};
    sweep.theta_count = quick ? 4 : 10;
    sweep.repetitions = quick ? 2 : 5;
    auto time_sweep = [&](int threads) {
        sweep.threads = threads;
        const auto start = std::chrono::steady_clock::now();
        const auto cells = run_sweep(sweep);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("sweep %zu adaptive cells, %d thread(s): %.2f s\n", cells.size(), threads, s);
    };
    time_sweep(1);
    if (omp_get_max_threads() > 1) time_sweep(omp_get_max_threads());
    return 0;
}
