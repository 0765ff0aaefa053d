#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "peakcast/extrema.hpp"
#include "peakcast/hammersley.hpp"
#include "peakcast/memd.hpp"
#include "peakcast/rng.hpp"
#include "peakcast/spline.hpp"

using namespace peakcast;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

ChannelMatrix smooth_random(std::size_t m, std::size_t L, std::uint64_t seed) {
    Rng rng(seed);
    ChannelMatrix X;
    X.labels.resize(m);
    X.channels.assign(m, std::vector<double>(L));
    for (std::size_t c = 0; c < m; ++c) {
        X.labels[c] = "ch" + std::to_string(c);
        const double f1 = 3.0 + 6.0 * rng.uniform();
        const double f2 = 15.0 + 25.0 * rng.uniform();
        const double a2 = 0.3 + 0.5 * rng.uniform();
        const double p1 = kTwoPi * rng.uniform();
        const double p2 = kTwoPi * rng.uniform();
        const double trend = 2.0 * rng.uniform() - 1.0;
        for (std::size_t t = 0; t < L; ++t) {
            const double u = static_cast<double>(t) / static_cast<double>(L);
            X.channels[c][t] = std::sin(kTwoPi * f1 * u + p1) +
                               a2 * std::sin(kTwoPi * f2 * u + p2) + trend * u;
        }
    }
    return X;
}

// 8-cycle tone + 1-cycle tone on every channel, phase-shifted per channel.
ChannelMatrix two_tone(std::size_t m, std::size_t L, std::vector<std::vector<double>>* fast,
                       std::vector<std::vector<double>>* slow) {
    ChannelMatrix X;
    X.labels.resize(m);
    X.channels.assign(m, std::vector<double>(L));
    if (fast) fast->assign(m, std::vector<double>(L));
    if (slow) slow->assign(m, std::vector<double>(L));
    for (std::size_t c = 0; c < m; ++c) {
        X.labels[c] = "ch" + std::to_string(c);
        const double phase = 0.31 * static_cast<double>(c);
        for (std::size_t t = 0; t < L; ++t) {
            const double u = static_cast<double>(t) / static_cast<double>(L);
            const double hf = std::sin(kTwoPi * 8.0 * u + phase);
            const double lf = std::sin(kTwoPi * u + 0.7 * phase);
            X.channels[c][t] = hf + lf;
            if (fast) (*fast)[c][t] = hf;
            if (slow) (*slow)[c][t] = lf;
        }
    }
    return X;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        sab += (a[t] - ma) * (b[t] - mb);
        saa += (a[t] - ma) * (a[t] - ma);
        sbb += (b[t] - mb) * (b[t] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("radical inverse and Hammersley direction geometry") {
    CHECK(radical_inverse(2, 1) == 0.5);
    CHECK(radical_inverse(2, 2) == 0.25);
    CHECK(radical_inverse(2, 3) == 0.75);

    for (std::size_t m : {2u, 3u, 4u, 6u}) {
        const DirectionSet dirs = hammersley_directions(16 * m, m);
        CHECK(dirs.vectors.size() == 16 * m);
        for (const auto& v : dirs.vectors) {
            REQUIRE(v.size() == m);
            double norm2 = 0.0;
            for (double x : v) norm2 += x * x;
            CHECK(std::fabs(std::sqrt(norm2) - 1.0) < 1e-12);
        }
    }
    // m=2: every vector is (cos t, sin t) for its angle.
    const DirectionSet d2 = hammersley_directions(8, 2);
    for (std::size_t k = 0; k < d2.vectors.size(); ++k) {
        CHECK(d2.vectors[k][0] == doctest::Approx(std::cos(d2.angles[k][0])).epsilon(1e-12));
        CHECK(d2.vectors[k][1] == doctest::Approx(std::sin(d2.angles[k][0])).epsilon(1e-12));
    }
    CHECK_THROWS(hammersley_directions(7, 4));  // K < 2m
    CHECK_THROWS(hammersley_directions(8, 1));  // m < 2
}

TEST_CASE("Hammersley set beats pseudo-random points on star discrepancy") {
    // Brute-force discrepancy estimate over anchored boxes with random
    // corners: sup |fraction inside - volume|.
    const std::size_t K = 256, dim = 3;  // m=4 -> 3 hypercube coordinates
    const auto ham = hammersley_points(K, dim);
    Rng rng(2024);
    std::vector<std::vector<double>> uni(K, std::vector<double>(dim));
    for (auto& p : uni) {
        for (double& x : p) x = rng.uniform();
    }
    auto discrepancy = [&rng, dim, K](const std::vector<std::vector<double>>& pts) {
        Rng corners(909);
        double worst = 0.0;
        for (int trial = 0; trial < 10000; ++trial) {
            std::vector<double> c(dim);
            double vol = 1.0;
            for (double& x : c) {
                x = corners.uniform();
                vol *= x;
            }
            std::size_t inside = 0;
            for (const auto& p : pts) {
                bool in = true;
                for (std::size_t j = 0; j < dim; ++j) in = in && p[j] < c[j];
                inside += in;
            }
            worst = std::max(worst,
                             std::fabs(static_cast<double>(inside) / static_cast<double>(K) - vol));
        }
        (void)rng;
        return worst;
    };
    CHECK(discrepancy(ham) < discrepancy(uni));
}

TEST_CASE("projection is the per-time inner product") {
    Rng rng(3);
    const ChannelMatrix X = smooth_random(4, 64, 17);
    const DirectionSet dirs = hammersley_directions(16, 4);
    for (const auto& dir : dirs.vectors) {
        const std::vector<double> p = project(X, dir);
        for (std::size_t t = 0; t < 64; ++t) {
            double dot = 0.0;
            for (std::size_t c = 0; c < 4; ++c) dot += X.channels[c][t] * dir[c];
            CHECK(p[t] == doctest::Approx(dot).epsilon(1e-12));
        }
    }
    // Basis direction returns the channel unchanged.
    const std::vector<double> e1 = {1.0, 0.0, 0.0, 0.0};
    CHECK(project(X, e1) == X.channels[0]);
    const std::vector<double> short_dir = {1.0, 0.0};
    CHECK_THROWS(project(X, short_dir));
}

TEST_CASE("extrema detection: strict extrema and plateau midpoints") {
    const std::vector<double> mono_in = {1.0, 2.0, 3.0, 4.0, 5.0};
    const ExtremaResult mono = find_extrema(mono_in);
    CHECK(mono.maxima.empty());
    CHECK(mono.minima.empty());

    const std::vector<double> zz_in = {0.0, 1.0, 0.0, 1.0, 0.0};
    const ExtremaResult zigzag = find_extrema(zz_in);
    CHECK(zigzag.maxima == std::vector<std::size_t>{1, 3});
    CHECK(zigzag.minima == std::vector<std::size_t>{2});

    // Interior plateau contributes its midpoint.
    const std::vector<double> pl_in = {0.0, 2.0, 2.0, 2.0, 0.0, 1.0, 0.0};
    const ExtremaResult plateau = find_extrema(pl_in);
    CHECK(plateau.maxima == std::vector<std::size_t>{2, 5});
    CHECK(plateau.minima == std::vector<std::size_t>{4});

    // sin with 3 cycles: 3 maxima, 3 minima within +-1 of analytic spots.
    const std::size_t L = 300;
    std::vector<double> s(L);
    for (std::size_t t = 0; t < L; ++t) {
        s[t] = std::sin(kTwoPi * 3.0 * static_cast<double>(t) / static_cast<double>(L));
    }
    const ExtremaResult se = find_extrema(s);
    REQUIRE(se.maxima.size() == 3);
    REQUIRE(se.minima.size() == 3);
    for (int k = 0; k < 3; ++k) {
        const double tmax = (0.25 + k) / 3.0 * L;
        const double tmin = (0.75 + k) / 3.0 * L;
        CHECK(std::fabs(static_cast<double>(se.maxima[k]) - tmax) <= 1.0);
        CHECK(std::fabs(static_cast<double>(se.minima[k]) - tmin) <= 1.0);
    }
    const std::vector<double> two_in = {1.0, 2.0};
    CHECK_THROWS(find_extrema(two_in));
}

TEST_CASE("spline envelopes: interpolation, degenerate shapes, sine bound") {
    // Constant extrema -> constant envelope.
    ChannelMatrix X;
    X.labels = {"a"};
    X.channels = {{5.0, 1.0, 5.0, 0.0, 5.0, 2.0, 5.0}};
    std::vector<std::size_t> knots = {0, 2, 4, 6};
    const auto env = spline_envelope(knots, X);
    REQUIRE(env.has_value());
    for (std::size_t t : knots) CHECK(env->values[0][t] == doctest::Approx(5.0).epsilon(1e-12));
    for (double v : env->values[0]) CHECK(v == doctest::Approx(5.0).epsilon(1e-9));

    // Collinear extrema: exact at the knots, near-linear in the interior, and
    // bounded near the ends (the symmetric boundary reflection folds the trend
    // back instead of extrapolating it).
    ChannelMatrix lin;
    lin.labels = {"a"};
    lin.channels = {{0.0, 9.0, 2.0, 9.0, 4.0, 9.0, 6.0}};
    const std::vector<std::size_t> lin_knots = {0, 2, 4, 6};
    const auto lenv = spline_envelope(lin_knots, lin);
    REQUIRE(lenv.has_value());
    for (std::size_t t : lin_knots) {
        CHECK(lenv->values[0][t] == doctest::Approx(static_cast<double>(t)).epsilon(1e-12));
    }
    CHECK(lenv->values[0][3] == doctest::Approx(3.0).epsilon(0.05));
    for (double v : lenv->values[0]) {
        CHECK(v >= -0.5);
        CHECK(v <= 6.5);
    }

    // Fewer than 3 extrema -> exclusion signal, not an error.
    const std::vector<std::size_t> two_knots = {1, 3};
    CHECK_FALSE(spline_envelope(two_knots, X).has_value());

    // Upper envelope of sin at its maxima stays near 1 over the interior.
    const std::size_t L = 400;
    ChannelMatrix sine;
    sine.labels = {"s"};
    sine.channels.assign(1, std::vector<double>(L));
    for (std::size_t t = 0; t < L; ++t) {
        sine.channels[0][t] = std::sin(kTwoPi * 5.0 * static_cast<double>(t) / static_cast<double>(L));
    }
    const ExtremaResult ext = find_extrema(sine.channels[0]);
    const auto senv = spline_envelope(ext.maxima, sine);
    REQUIRE(senv.has_value());
    for (std::size_t t = L / 10; t < L - L / 10; ++t) {
        CHECK(std::fabs(senv->values[0][t] - 1.0) < 0.05);
    }
}

TEST_CASE("mean envelope: exclusion counting and the recomputation oracle") {
    // Constant signal: every direction excluded -> no-oscillation signal.
    ChannelMatrix flat;
    flat.labels = {"a", "b", "c", "d"};
    flat.channels.assign(4, std::vector<double>(32, 3.25));
    SiftConfig cfg;
    cfg.num_directions = 16;
    const DirectionSet dirs = hammersley_directions(16, 4);
    const MeanEnvelopeResult r = mean_envelope(flat, dirs, cfg);
    CHECK(r.no_oscillation);
    CHECK(r.excluded == 16);

    // Random signal: OpenMP kernel equals the serial reference and is
    // byte-identical with the parallel flag off.
    const ChannelMatrix X = smooth_random(4, 128, 5);
    const DirectionSet d64 = hammersley_directions(64, 4);
    SiftConfig c64;
    c64.num_directions = 64;
    const MeanEnvelopeResult par = mean_envelope(X, d64, c64);
    const MeanEnvelopeResult ser = reference::mean_envelope_serial(X, d64, c64.min_extrema);
    REQUIRE_FALSE(par.no_oscillation);
    CHECK(par.excluded == ser.excluded);
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t t = 0; t < 128; ++t) {
            CHECK(par.mean[c][t] == doctest::Approx(ser.mean[c][t]).epsilon(1e-10));
        }
    }
    SiftConfig coff = c64;
    coff.parallel = false;
    const MeanEnvelopeResult seq = mean_envelope(X, d64, coff);
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t t = 0; t < 128; ++t) CHECK(par.mean[c][t] == seq.mean[c][t]);
    }
}

TEST_CASE("sift: identity, tone passthrough, huge-tolerance single pass") {
    const ChannelMatrix X = smooth_random(4, 256, 9);
    const DirectionSet dirs = hammersley_directions(64, 4);
    SiftConfig cfg;
    cfg.num_directions = 64;

    const SiftResult r = sift(X, dirs, cfg);
    REQUIRE_FALSE(r.no_oscillation);
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t t = 0; t < 256; ++t) {
            CHECK(r.imf.channels[c][t] + r.remainder.channels[c][t] ==
                  doctest::Approx(X.channels[c][t]).epsilon(1e-10));
        }
    }

    SiftConfig one = cfg;
    one.sift_tolerance = 1e12;
    CHECK(sift(X, dirs, one).iterations == 1);

    // A pure tone survives sifting nearly unchanged.
    std::vector<std::vector<double>> fast;
    ChannelMatrix tone;
    tone.labels = {"a", "b", "c", "d"};
    tone.channels.assign(4, std::vector<double>(256));
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t t = 0; t < 256; ++t) {
            tone.channels[c][t] =
                std::sin(kTwoPi * 8.0 * static_cast<double>(t) / 256.0 + 0.2 * c);
        }
    }
    const SiftResult tr = sift(tone, dirs, cfg);
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(correlation(tr.imf.channels[c], tone.channels[c]) > 0.99);
    }
}

TEST_CASE("memd: degenerate inputs, completeness, alignment, determinism") {
    SiftConfig cfg;
    cfg.num_directions = 64;

    ChannelMatrix flat;
    flat.labels = {"a", "b", "c", "d"};
    flat.channels.assign(4, std::vector<double>(32, 1.5));
    const ImfSet f = memd(flat, cfg);
    CHECK(f.n_modes() == 0);
    CHECK(f.residue.channels[0] == flat.channels[0]);

    ChannelMatrix tiny;
    tiny.labels = {"a", "b"};
    tiny.channels.assign(2, std::vector<double>(8, 0.0));
    CHECK_THROWS(memd(tiny, cfg));

    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        const ChannelMatrix X = smooth_random(4, 256, seed);
        const ImfSet s = memd(X, cfg);
        CHECK(s.reconstruction_error(X) < 1e-8);
        for (const ChannelMatrix& mode : s.modes) {
            CHECK(mode.dim() == 4);
            CHECK(mode.length() == 256);
        }
    }

    // Bit-identical across repeated runs.
    const ChannelMatrix X = smooth_random(4, 200, 77);
    const ImfSet a = memd(X, cfg);
    const ImfSet b = memd(X, cfg);
    REQUIRE(a.n_modes() == b.n_modes());
    for (std::size_t i = 0; i < a.n_components(); ++i) {
        for (std::size_t c = 0; c < 4; ++c) {
            CHECK(a.component(i).channels[c] == b.component(i).channels[c]);
        }
    }
}

TEST_CASE("memd separates a fast tone from a slow tone") {
    std::vector<std::vector<double>> fast, slow;
    const ChannelMatrix X = two_tone(4, 512, &fast, &slow);
    SiftConfig cfg;
    cfg.num_directions = 64;
    const ImfSet s = memd(X, cfg);
    REQUIRE(s.n_components() >= 2);

    // Component 0 tracks the 8-cycle tone; the 1-cycle tone (too few extrema
    // to sift out) accumulates in a later component, located by correlation.
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(correlation(s.component(0).channels[c], fast[c]) > 0.95);
    }
    std::size_t slow_comp = 1;
    double best = -2.0;
    for (std::size_t i = 1; i < s.n_components(); ++i) {
        const double corr = correlation(s.component(i).channels[0], slow[0]);
        if (corr > best) {
            best = corr;
            slow_comp = i;
        }
    }
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(correlation(s.component(slow_comp).channels[c], slow[c]) > 0.95);
    }

    // Frequency ordering: zero-crossing counts non-increasing across modes.
    for (std::size_t i = 0; i + 1 < s.n_components(); ++i) {
        CHECK(count_zero_crossings(s.component(i).channels[0]) >=
              count_zero_crossings(s.component(i + 1).channels[0]));
    }
}

TEST_CASE("emd mirrors the univariate contract") {
    SiftConfig cfg;
    std::vector<double> flat(64, 2.0);
    CHECK(emd(flat, cfg).n_modes() == 0);

    std::vector<double> ramp(64);
    for (std::size_t t = 0; t < 64; ++t) ramp[t] = static_cast<double>(t) * 0.5;
    const ImfSet r = emd(ramp, cfg);
    CHECK(r.n_modes() == 0);
    CHECK(r.residue.channels[0] == ramp);

    std::vector<double> x(512);
    std::vector<double> hf(512), lf(512);
    for (std::size_t t = 0; t < 512; ++t) {
        const double u = static_cast<double>(t) / 512.0;
        hf[t] = std::sin(kTwoPi * 8.0 * u);
        lf[t] = std::sin(kTwoPi * u);
        x[t] = hf[t] + lf[t];
    }
    const ImfSet s = emd(x, cfg);
    REQUIRE(s.n_components() >= 2);
    CHECK(correlation(s.component(0).channels[0], hf) > 0.95);
    double best = -2.0;
    for (std::size_t i = 1; i < s.n_components(); ++i) {
        best = std::max(best, correlation(s.component(i).channels[0], lf));
    }
    CHECK(best > 0.95);

    ChannelMatrix uni;
    uni.labels = {"x"};
    uni.channels = {x};
    const ImfSet full = emd(x, cfg);
    CHECK(full.reconstruction_error(uni) < 1e-8);
}

TEST_CASE("eemd reduces to emd and stays stable under noise") {
    SiftConfig cfg;
    std::vector<double> x(512);
    std::vector<double> hf(512);
    for (std::size_t t = 0; t < 512; ++t) {
        const double u = static_cast<double>(t) / 512.0;
        hf[t] = std::sin(kTwoPi * 8.0 * u);
        x[t] = hf[t] + std::sin(kTwoPi * u);
    }

    // Nstd=0 cases collapse to plain EMD (NE=1 bitwise, NE=5 identical members).
    const ImfSet plain = emd(x, cfg);
    for (std::size_t ne : {1u, 5u}) {
        const ImfSet e = eemd(x, 0.0, ne, cfg, 42);
        REQUIRE(e.n_modes() == plain.n_modes());
        for (std::size_t i = 0; i < e.n_components(); ++i) {
            if (ne == 1) {
                CHECK(e.component(i).channels[0] == plain.component(i).channels[0]);
            } else {
                for (std::size_t t = 0; t < 512; ++t) {
                    CHECK(e.component(i).channels[0][t] ==
                          doctest::Approx(plain.component(i).channels[0][t]).epsilon(1e-12));
                }
            }
        }
    }

    // Seeded noisy ensemble: the fast tone's best-matching component stays
    // within 0.05 of the noise-free run's best correlation.
    const ImfSet noisy = eemd(x, 0.2, 50, cfg, 1);
    auto best_corr = [&hf](const ImfSet& s) {
        double best = -2.0;
        for (std::size_t i = 0; i < s.n_components(); ++i) {
            best = std::max(best, correlation(s.component(i).channels[0], hf));
        }
        return best;
    };
    const double c_plain = best_corr(plain);
    const double c_noisy = best_corr(noisy);
    CHECK(std::fabs(c_plain - c_noisy) < 0.05);

    // Determinism under a fixed seed.
    const ImfSet again = eemd(x, 0.2, 50, cfg, 1);
    REQUIRE(again.n_modes() == noisy.n_modes());
    for (std::size_t i = 0; i < again.n_components(); ++i) {
        CHECK(again.component(i).channels[0] == noisy.component(i).channels[0]);
    }
}
