#ifndef EEESIM_SELFSIM_HPP
#define EEESIM_SELFSIM_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "eeesim/traffic.hpp"

namespace eeesim {

struct VarianceTimePoint {
    std::size_t a = 1;
    double log10_a = 0.0;
    double log10_var = 0.0;
};

struct VarianceTimeResult {
    std::vector<VarianceTimePoint> points;
    std::vector<std::size_t> skipped_a; // zero-variance levels
};

struct HurstEstimate {
    double h_hat = 0.0;     // 1 + beta_hat/2, exact identity
    double beta_hat = 0.0;  // fitted variance-time slope
    double h_clamped = 0.0; // h_hat clamped to [0,1] for reporting/gating
    double r_squared = 0.0;
    std::vector<VarianceTimePoint> points;
};

// Biased (1/n) autocovariance estimator; k = 0 is the sample variance.
double sample_autocovariance(const std::vector<double>& series, std::size_t k);

// gamma(k) = (sigma2/2)((k+1)^2H - 2k^2H + (k-1)^2H) for an exactly
// second-order self-similar process. Test oracle for the estimators.
double exact_ss_autocovariance(std::size_t k, double hurst, double sigma2);

VarianceTimeResult variance_time_points(const LoadSeries& series,
                                        const std::vector<std::size_t>& a_values);

// Ordinary least-squares slope in (log10_a, log10_var) space.
double fit_slope(const std::vector<VarianceTimePoint>& points);

// Geometric default grid: 1, 2, 4, ..., 2^floor(log2(n/10)).
std::vector<std::size_t> default_aggregation_levels(std::size_t n);

HurstEstimate estimate_hurst(const LoadSeries& series);
HurstEstimate estimate_hurst(const LoadSeries& series, const std::vector<std::size_t>& a_values);

void write_variance_time_csv(const std::vector<VarianceTimePoint>& points, const std::string& path);

} // namespace eeesim

#endif
