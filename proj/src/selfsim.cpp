#include "eeesim/selfsim.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace eeesim {

double sample_autocovariance(const std::vector<double>& series, std::size_t k) {
    const std::size_t n = series.size();
    if (k >= n) throw std::invalid_argument("sample_autocovariance: lag out of range");
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t t = 0; t + k < n; ++t)
        sum += (series[t] - mean) * (series[t + k] - mean);
    return sum / static_cast<double>(n);
}

double exact_ss_autocovariance(std::size_t k, double hurst, double sigma2) {
    if (k < 1) throw std::invalid_argument("exact_ss_autocovariance: lag must be >= 1");
    if (!(hurst > 0.0) || !(hurst <= 1.0))
        throw std::invalid_argument("exact_ss_autocovariance: H must be in (0,1]");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("exact_ss_autocovariance: sigma2 must be > 0");
    const double kk = static_cast<double>(k);
    const double e = 2.0 * hurst;
    return 0.5 * sigma2 *
           (std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) + std::pow(kk - 1.0, e));
}

VarianceTimeResult variance_time_points(const LoadSeries& series,
                                        const std::vector<std::size_t>& a_values) {
    VarianceTimeResult result;
    for (const std::size_t a : a_values) {
        if (a < 1) throw std::invalid_argument("variance_time_points: level must be >= 1");
        const LoadSeries agg = aggregate_series(series, a);
        if (agg.values.size() < 2)
            throw std::invalid_argument("variance_time_points: aggregated length < 2 at a=" +
                                        std::to_string(a));
        const double var = sample_autocovariance(agg.values, 0);
        if (var <= 0.0) {
            result.skipped_a.push_back(a);
            continue;
        }
        result.points.push_back({a, std::log10(static_cast<double>(a)), std::log10(var)});
    }
    if (result.points.size() < 2)
        throw std::invalid_argument("variance_time_points: fewer than 2 usable points");
    return result;
}

double fit_slope(const std::vector<VarianceTimePoint>& points) {
    const std::size_t n = points.size();
    if (n < 2) throw std::invalid_argument("fit_slope: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.log10_a;
        my += p.log10_var;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        sxx += (p.log10_a - mx) * (p.log10_a - mx);
        sxy += (p.log10_a - mx) * (p.log10_var - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
    return sxy / sxx;
}

std::vector<std::size_t> default_aggregation_levels(std::size_t n) {
    std::vector<std::size_t> levels;
    for (std::size_t a = 1; a <= n / 10; a *= 2) levels.push_back(a);
    return levels;
}

HurstEstimate estimate_hurst(const LoadSeries& series) {
    return estimate_hurst(series, default_aggregation_levels(series.values.size()));
}

HurstEstimate estimate_hurst(const LoadSeries& series, const std::vector<std::size_t>& a_values) {
    const VarianceTimeResult vt = variance_time_points(series, a_values);

    HurstEstimate est;
    est.points = vt.points;
    est.beta_hat = fit_slope(vt.points);
    est.h_hat = 1.0 + est.beta_hat / 2.0;
    est.h_clamped = std::min(1.0, std::max(0.0, est.h_hat));

    // R^2 of the least-squares line
    double my = 0.0;
    for (const auto& p : vt.points) my += p.log10_var;
    my /= static_cast<double>(vt.points.size());
    double mx = 0.0;
    for (const auto& p : vt.points) mx += p.log10_a;
    mx /= static_cast<double>(vt.points.size());
    double ss_tot = 0.0, ss_res = 0.0;
    for (const auto& p : vt.points) {
        const double fit = my + est.beta_hat * (p.log10_a - mx);
        ss_res += (p.log10_var - fit) * (p.log10_var - fit);
        ss_tot += (p.log10_var - my) * (p.log10_var - my);
    }
    est.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return est;
}

void write_variance_time_csv(const std::vector<VarianceTimePoint>& points,
                             const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "a,log10_a,log10_var\n";
    for (const auto& p : points)
        out << p.a << ',' << p.log10_a << ',' << p.log10_var << '\n';
}

} // namespace eeesim
