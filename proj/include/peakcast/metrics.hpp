#pragma once

#include <span>
#include <vector>

namespace peakcast {

struct MetricReport {
    double r2 = 0.0;
    double rmse = 0.0;  // MW
    double mape = 0.0;  // percent
    double da = 0.0;    // percent
    std::size_t n = 0;
};

struct DmResult {
    double dm = 0.0;
    double p_value = 1.0;
    std::size_t length = 0;
};

double r2(std::span<const double> actual, std::span<const double> predicted);
double rmse(std::span<const double> actual, std::span<const double> predicted);
double mape(std::span<const double> actual, std::span<const double> predicted);
double da(std::span<const double> actual, std::span<const double> predicted);

MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted);

// DM = mean(d) / std(d) with the (T-1)-denominator std, d_i = a_i - b_i;
// two-sided standard-normal p-value. Identical loss series are an error.
DmResult dm_test(std::span<const double> losses_a, std::span<const double> losses_b);

// Classical variant: sqrt(T) * mean(d) / std(d) (naive variance, no
// autocorrelation correction). Numerically equals dm_test * sqrt(T).
DmResult dm_classical(std::span<const double> losses_a, std::span<const double> losses_b);

struct AnovaResult {
    double f = 0.0;
    double p_value = 1.0;
    std::size_t df_between = 0;
    std::size_t df_within = 0;
};

AnovaResult anova_f(const std::vector<std::vector<double>>& groups);

// Two-sided standard normal tail and upper F tail (regularized incomplete
// beta via continued fraction).
double normal_two_sided_p(double statistic);
double f_upper_tail_p(double f, double df1, double df2);

}  // namespace peakcast
