#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace sstuq::stats {

/// Linear interpolation between order statistics of an ascending sample:
/// position (n-1) p, i.e. R's type 7.
double quantile_sorted(std::span<const double> sorted, double p);

/// Same on an unsorted sample (copied and sorted).
double quantile(std::span<const double> sample, double p);

template <typename Derived>
double quantile(const Eigen::DenseBase<Derived>& v, double p) {
    std::vector<double> tmp(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) tmp[static_cast<std::size_t>(i)] = v.derived().coeff(i);
    return quantile(std::span<const double>(tmp), p);
}

double mean(std::span<const double> x);

/// Sample standard deviation (n-1 denominator); 0 for fewer than two points.
double sample_std(std::span<const double> x);

/// Biased sample autocovariance at `lag` (mean removed, divided by n).
double autocovariance(std::span<const double> x, std::size_t lag);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// D'Agostino-Pearson omnibus K^2 test: skewness and kurtosis z-scores combined,
/// K^2 ~ chi^2_2 under normality, p = exp(-K^2/2). Needs n >= 20.
TestResult dagostino_pearson(std::span<const double> x);

/// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// One-sample KS test against N(0, 1) with Stephens' small-sample correction.
TestResult ks_standard_normal(std::span<const double> x);

/// Two-sample KS statistic sup |F_a - F_b| and its asymptotic p-value.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace sstuq::stats
