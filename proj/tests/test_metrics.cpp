#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "peakcast/metrics.hpp"
#include "peakcast/rng.hpp"

using namespace peakcast;

namespace {

// Independent single-pass references, written separately from src/metrics.cpp.
namespace ref {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double r2(const std::vector<double>& y, const std::vector<double>& yh) {
    const double yb = mean_of(y);
    double sse = 0.0, sst = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        sse += (y[t] - yh[t]) * (y[t] - yh[t]);
        sst += (y[t] - yb) * (y[t] - yb);
    }
    return 1.0 - sse / sst;
}

double rmse(const std::vector<double>& y, const std::vector<double>& yh) {
    double s = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) s += (y[t] - yh[t]) * (y[t] - yh[t]);
    return std::sqrt(s / static_cast<double>(y.size()));
}

double mape(const std::vector<double>& y, const std::vector<double>& yh) {
    double s = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) s += std::fabs((y[t] - yh[t]) / y[t]);
    return 100.0 * s / static_cast<double>(y.size());
}

double da(const std::vector<double>& y, const std::vector<double>& yh) {
    std::size_t hits = 0;
    for (std::size_t t = 1; t < y.size(); ++t) {
        if ((y[t] - y[t - 1]) * (yh[t] - yh[t - 1]) >= 0.0) ++hits;
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(y.size() - 1);
}

double dm(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t t = 0; t < a.size(); ++t) d[t] = a[t] - b[t];
    const double m = mean_of(d);
    double var = 0.0;
    for (double v : d) var += (v - m) * (v - m);
    return m / std::sqrt(var / static_cast<double>(d.size() - 1));
}

double anova_f(const std::vector<std::vector<double>>& groups) {
    std::size_t total_n = 0;
    double grand = 0.0;
    for (const auto& g : groups) {
        total_n += g.size();
        grand = std::accumulate(g.begin(), g.end(), grand);
    }
    grand /= static_cast<double>(total_n);
    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        const double gm = mean_of(g);
        ssb += static_cast<double>(g.size()) * (gm - grand) * (gm - grand);
        for (double v : g) ssw += (v - gm) * (v - gm);
    }
    const double msb = ssb / static_cast<double>(groups.size() - 1);
    const double msw = ssw / static_cast<double>(total_n - groups.size());
    return msb / msw;
}

}  // namespace ref

std::vector<double> random_series(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = lo + (hi - lo) * rng.uniform();
    return v;
}

}  // namespace

TEST_CASE("worked examples pass exactly") {
    const std::vector<double> a1 = {0.0, 0.0}, p1 = {3.0, 4.0};
    CHECK(rmse(a1, p1) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));

    const std::vector<double> a2 = {100.0, 200.0}, p2 = {110.0, 180.0};
    CHECK(mape(a2, p2) == doctest::Approx(10.0).epsilon(1e-12));

    const std::vector<double> la = {3.0, 1.0}, lb = {1.0, 1.0};
    CHECK(dm_test(la, lb).dm == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK(anova_f({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}}).f ==
          doctest::Approx(13.5).epsilon(1e-12));

    const std::vector<double> a3 = {1.0, 2.0, 3.0}, p3 = {1.0, 2.0, 4.0};
    CHECK(r2(a3, p3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("trivial boundary cases") {
    const std::vector<double> y = {1.0, 2.0, 5.0, 3.0};
    CHECK(r2(y, y) == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<double> mean_pred(4, (1.0 + 2.0 + 5.0 + 3.0) / 4.0);
    CHECK(r2(y, mean_pred) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rmse(y, y) == 0.0);
    CHECK(mape(y, y) == 0.0);
    CHECK(da(y, y) == 100.0);

    // Opposite directions everywhere -> DA 0.
    const std::vector<double> za = {1.0, 2.0, 1.0, 2.0}, zp = {1.0, 0.0, 2.0, 1.0};
    CHECK(da(za, zp) == 0.0);
    // Flat prediction: zero differences count as agreement.
    const std::vector<double> flat(4, 7.0);
    CHECK(da(y, flat) == 100.0);
}

TEST_CASE("error conditions") {
    const std::vector<double> y = {1.0, 2.0, 3.0};
    const std::vector<double> flat3 = {2.0, 2.0, 2.0};
    const std::vector<double> two = {1.0, 2.0};
    const std::vector<double> with_zero = {1.0, 0.0, 3.0};
    const std::vector<double> one = {1.0};
    const std::vector<double> shifted = {2.0, 3.0, 4.0};
    CHECK_THROWS(r2(flat3, y));  // zero variance in actual
    CHECK_THROWS(rmse(y, two));  // length mismatch
    CHECK_THROWS(mape(with_zero, y));
    CHECK_THROWS(da(one, one));
    CHECK_THROWS(dm_test(y, y));       // identical losses -> d_std = 0
    CHECK_THROWS(dm_test(shifted, y)); // constant difference -> d_std = 0
    CHECK_THROWS(anova_f({{1.0, 1.0}, {2.0, 2.0}}));  // zero within-group variance
    CHECK_THROWS(anova_f({{1.0, 2.0}}));              // single group
}

TEST_CASE("metrics match an independent reference on 100 random pairs") {
    Rng rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 90);
        const std::vector<double> y = random_series(rng, n, 100.0, 1000.0);
        const std::vector<double> yh = random_series(rng, n, 100.0, 1000.0);
        CHECK(r2(y, yh) == doctest::Approx(ref::r2(y, yh)).epsilon(1e-10));
        CHECK(rmse(y, yh) == doctest::Approx(ref::rmse(y, yh)).epsilon(1e-10));
        CHECK(mape(y, yh) == doctest::Approx(ref::mape(y, yh)).epsilon(1e-10));
        CHECK(da(y, yh) == doctest::Approx(ref::da(y, yh)).epsilon(1e-10));
        CHECK(dm_test(y, yh).dm == doctest::Approx(ref::dm(y, yh)).epsilon(1e-10));
        const std::vector<double> g3 = random_series(rng, n, 100.0, 1000.0);
        CHECK(anova_f({y, yh, g3}).f ==
              doctest::Approx(ref::anova_f({y, yh, g3})).epsilon(1e-10));
    }
}

TEST_CASE("metric properties: scaling, antisymmetry, ranges") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 50);
        const std::vector<double> y = random_series(rng, n, 50.0, 500.0);
        const std::vector<double> yh = random_series(rng, n, 50.0, 500.0);

        // RMSE homogeneity and MAPE scale invariance under k > 0.
        const double k = 3.5;
        std::vector<double> ky = y, kyh = yh;
        for (double& v : ky) v *= k;
        for (double& v : kyh) v *= k;
        CHECK(rmse(ky, kyh) == doctest::Approx(k * rmse(y, yh)).epsilon(1e-10));
        CHECK(mape(ky, kyh) == doctest::Approx(mape(y, yh)).epsilon(1e-10));

        const double v = da(y, yh);
        CHECK(v >= 0.0);
        CHECK(v <= 100.0);
        CHECK(r2(y, yh) <= 1.0);

        // DM antisymmetry, and the classical statistic = dm * sqrt(T).
        const DmResult d1 = dm_test(y, yh);
        const DmResult d2 = dm_test(yh, y);
        CHECK(d1.dm == doctest::Approx(-d2.dm).epsilon(1e-12));
        CHECK(d1.p_value == doctest::Approx(d2.p_value).epsilon(1e-12));
        const DmResult dc = dm_classical(y, yh);
        CHECK(dc.dm ==
              doctest::Approx(d1.dm * std::sqrt(static_cast<double>(n))).epsilon(1e-10));

        // Permuting values within ANOVA groups leaves F unchanged.
        std::vector<double> yp = y;
        std::swap(yp.front(), yp.back());
        CHECK(anova_f({yp, yh}).f == doctest::Approx(anova_f({y, yh}).f).epsilon(1e-10));
    }
}

TEST_CASE("p-values agree with frozen external references") {
    // Standard normal two-sided tails.
    CHECK(normal_two_sided_p(0.5) == doctest::Approx(0.6170750774519738).epsilon(1e-10));
    CHECK(normal_two_sided_p(1.0) == doctest::Approx(0.31731050786291415).epsilon(1e-10));
    CHECK(normal_two_sided_p(1.96) == doctest::Approx(0.04999579029644087).epsilon(1e-10));
    CHECK(normal_two_sided_p(-3.0) == doctest::Approx(0.0026997960632601913).epsilon(1e-10));
    CHECK(normal_two_sided_p(1.0 / std::sqrt(2.0)) ==
          doctest::Approx(0.47950012218695354).epsilon(1e-10));

    // Upper F tails.
    CHECK(f_upper_tail_p(13.5, 1, 4) == doctest::Approx(0.02131164112875672).epsilon(1e-9));
    CHECK(f_upper_tail_p(3.2, 2, 12) == doctest::Approx(0.0769450237840636).epsilon(1e-9));
    CHECK(f_upper_tail_p(0.7, 3, 20) == doctest::Approx(0.5630374080471039).epsilon(1e-9));

    // The worked ANOVA example carries its p-value through.
    const AnovaResult a = anova_f({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
    CHECK(a.p_value == doctest::Approx(0.02131164112875672).epsilon(1e-9));
    CHECK(a.df_between == 1);
    CHECK(a.df_within == 4);
}

TEST_CASE("compute_metrics bundles the four metrics") {
    Rng rng(5);
    const std::vector<double> y = random_series(rng, 30, 100.0, 200.0);
    const std::vector<double> yh = random_series(rng, 30, 100.0, 200.0);
    const MetricReport m = compute_metrics(y, yh);
    CHECK(m.n == 30);
    CHECK(m.r2 == r2(y, yh));
    CHECK(m.rmse == rmse(y, yh));
    CHECK(m.mape == mape(y, yh));
    CHECK(m.da == da(y, yh));
}
