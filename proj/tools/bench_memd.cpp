// Benchmark: OpenMP envelope-mean kernel vs the serial reference, plus a
// full decomposition timing with the parallel path on and off.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "peakcast/hammersley.hpp"
#include "peakcast/memd.hpp"
#include "peakcast/rng.hpp"
#include "peakcast/series.hpp"

using namespace peakcast;

namespace {

ChannelMatrix random_smooth(std::size_t m, std::size_t L, std::uint64_t seed) {
    Rng rng(seed);
    ChannelMatrix X;
    X.labels.resize(m);
    X.channels.assign(m, std::vector<double>(L));
    for (std::size_t c = 0; c < m; ++c) {
        X.labels[c] = "ch" + std::to_string(c);
        const double f1 = 2.0 + 10.0 * rng.uniform();
        const double f2 = 20.0 + 40.0 * rng.uniform();
        const double p1 = 6.28318530717958648 * rng.uniform();
        const double p2 = 6.28318530717958648 * rng.uniform();
        for (std::size_t t = 0; t < L; ++t) {
            const double u = static_cast<double>(t) / static_cast<double>(L);
            X.channels[c][t] = std::sin(6.28318530717958648 * f1 * u + p1) +
                               0.5 * std::sin(6.28318530717958648 * f2 * u + p2);
        }
    }
    return X;
}

template <typename F>
double time_seconds(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t L = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2048;
    const std::size_t m = 4;
    SiftConfig cfg;
    const DirectionSet dirs = hammersley_directions(cfg.num_directions, m);
    const ChannelMatrix X = random_smooth(m, L, 42);

    const int reps = 5;
    MeanEnvelopeResult parallel_result, serial_result;
    SiftConfig serial_cfg = cfg;
    serial_cfg.parallel = false;

    const double t_par = time_seconds([&] { parallel_result = mean_envelope(X, dirs, cfg); }, reps);
    const double t_ref = time_seconds(
        [&] { serial_result = reference::mean_envelope_serial(X, dirs, cfg.min_extrema); }, reps);

    double max_diff = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t t = 0; t < L; ++t) {
            max_diff = std::max(max_diff,
                                std::fabs(parallel_result.mean[c][t] - serial_result.mean[c][t]));
        }
    }

    std::printf("envelope-mean kernel, m=%zu L=%zu K=%zu, %d reps\n", m, L,
                cfg.num_directions, reps);
    std::printf("  openmp kernel : %9.4f s/call\n", t_par);
    std::printf("  serial oracle : %9.4f s/call\n", t_ref);
    std::printf("  speedup       : %9.2fx\n", t_ref / t_par);
    std::printf("  max |diff|    : %9.3e\n", max_diff);

    const double t_memd_par = time_seconds([&] { (void)memd(X, cfg); }, 1);
    const double t_memd_ser = time_seconds([&] { (void)memd(X, serial_cfg); }, 1);
    std::printf("full decomposition\n");
    std::printf("  parallel      : %9.4f s\n", t_memd_par);
    std::printf("  serial        : %9.4f s\n", t_memd_ser);
    std::printf("  speedup       : %9.2fx\n", t_memd_ser / t_memd_par);
    return 0;
}
