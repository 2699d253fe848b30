#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "eeesim/selfsim.hpp"
#include "eeesim/traffic.hpp"

using namespace eeesim;

namespace {

double u53(std::mt19937_64& eng) { return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53; }

LoadSeries iid_series(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    LoadSeries s;
    s.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.values.push_back(u53(eng));
    return s;
}

} // namespace

TEST_CASE("sample_autocovariance estimator") {
    SUBCASE("constant series has zero covariance at every lag") {
        const std::vector<double> c(50, 3.25);
        for (const std::size_t k : {0u, 1u, 10u, 49u})
            CHECK(sample_autocovariance(c, k) == doctest::Approx(0.0));
    }
    SUBCASE("lag zero is the biased sample variance") {
        CHECK(sample_autocovariance({1, 2, 3}, 0) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("alternating series at lag 1") {
        std::vector<double> alt(10000);
        for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
        // biased 1/n estimator gives -(n-1)/n, -> -1 for large n
        CHECK(sample_autocovariance(alt, 1) == doctest::Approx(-1.0).epsilon(1e-3));
    }
    SUBCASE("lag out of range") {
        CHECK_THROWS_AS(sample_autocovariance({1, 2, 3}, 3), std::invalid_argument);
    }
}

TEST_CASE("exact self-similar autocovariance closed form") {
    CHECK(exact_ss_autocovariance(1, 0.5, 1.0) == doctest::Approx(0.0)); // H=0.5 uncorrelated
    CHECK(exact_ss_autocovariance(1, 1.0, 1.0) == doctest::Approx(1.0)); // (4-2+0)/2
    // frozen from an independent evaluation of (1/2)(3^1.5 - 2*2^1.5 + 1)
    CHECK(exact_ss_autocovariance(2, 0.75, 1.0) == doctest::Approx(0.269649).epsilon(1e-4));
    CHECK(exact_ss_autocovariance(2, 0.75, 2.0) ==
          doctest::Approx(2.0 * 0.269649).epsilon(1e-4));

    SUBCASE("H = 0.5 vanishes at every lag") {
        for (std::size_t k = 1; k <= 100; ++k)
            CHECK(exact_ss_autocovariance(k, 0.5, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("positive and decreasing in k for H in (0.5, 1)") {
        for (const double h : {0.6, 0.75, 0.9}) {
            double prev = exact_ss_autocovariance(1, h, 1.0);
            CHECK(prev > 0.0);
            for (std::size_t k = 2; k <= 100; ++k) {
                const double cur = exact_ss_autocovariance(k, h, 1.0);
                CHECK(cur > 0.0);
                CHECK(cur < prev);
                prev = cur;
            }
        }
    }
    SUBCASE("domain violations") {
        CHECK_THROWS_AS(exact_ss_autocovariance(0, 0.7, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(exact_ss_autocovariance(1, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(exact_ss_autocovariance(1, 1.2, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(exact_ss_autocovariance(1, 0.7, 0.0), std::invalid_argument);
    }
}

TEST_CASE("variance_time_points") {
    SUBCASE("iid input slopes like -1") {
        const LoadSeries s = iid_series(100'000, 17);
        const VarianceTimeResult vt = variance_time_points(s, default_aggregation_levels(100'000));
        CHECK(vt.points.size() >= 10);
        const double slope = fit_slope(vt.points);
        CHECK(slope > -1.15);
        CHECK(slope < -0.85);
    }
    SUBCASE("constant series has no usable points") {
        LoadSeries c;
        c.values.assign(1000, 4.0);
        CHECK_THROWS_AS(variance_time_points(c, {1, 2, 4}), std::invalid_argument);
    }
    SUBCASE("a single level is not enough") {
        const LoadSeries s = iid_series(1000, 3);
        CHECK_THROWS_AS(variance_time_points(s, {1}), std::invalid_argument);
    }
}

TEST_CASE("fit_slope least squares") {
    SUBCASE("collinear points give the exact slope") {
        std::vector<VarianceTimePoint> pts;
        for (const double x : {0.0, 0.5, 1.0, 2.0}) pts.push_back({1, x, -0.5 * x + 3.0});
        CHECK(fit_slope(pts) == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("y = -x") {
        std::vector<VarianceTimePoint> pts{{1, 0.0, 0.0}, {2, 1.0, -1.0}, {4, 2.0, -2.0}};
        CHECK(fit_slope(pts) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("two points define the line") {
        std::vector<VarianceTimePoint> pts{{1, 0.0, 1.0}, {4, 2.0, 0.0}};
        CHECK(fit_slope(pts) == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("invariant under vertical translation") {
        std::mt19937_64 eng(5);
        std::vector<VarianceTimePoint> pts;
        for (int i = 0; i < 12; ++i)
            pts.push_back({1, 0.3 * i, u53(eng) * 4.0 - 2.0});
        const double base = fit_slope(pts);
        for (auto& p : pts) p.log10_var += 123.456;
        CHECK(fit_slope(pts) == doctest::Approx(base).epsilon(1e-9));
    }
    SUBCASE("degenerate abscissae rejected") {
        std::vector<VarianceTimePoint> pts{{2, 1.0, 0.0}, {2, 1.0, 1.0}};
        CHECK_THROWS_AS(fit_slope(pts), std::invalid_argument);
        CHECK_THROWS_AS(fit_slope({}), std::invalid_argument);
    }
}

TEST_CASE("estimate_hurst identity and iid control") {
    const LoadSeries s = iid_series(100'000, 4242);
    const HurstEstimate est = estimate_hurst(s);
    CHECK(est.h_hat == 1.0 + est.beta_hat / 2.0); // exact by construction
    CHECK(std::abs(est.h_hat - 0.5) < 0.05);
    CHECK(est.h_clamped >= 0.0);
    CHECK(est.h_clamped <= 1.0);
    CHECK(est.r_squared > 0.9);
    CHECK(est.points.size() >= 2);
}

TEST_CASE("estimate_hurst separates heavy-tailed source mixes") {
    // 30 s keeps this fast; the full-length runs live in the acceptance suite
    ParetoSourceConfig cfg;
    cfg.source_count = 10;
    cfg.location_b = 1.0;
    cfg.seed = 1;

    cfg.alpha = 1.0;
    const TrafficTrace high = synthesize_trace(cfg, 30.0, 1e-3, 1e9);
    cfg.alpha = 1.8;
    const TrafficTrace low = synthesize_trace(cfg, 30.0, 1e-3, 1e9);

    const double h_high = estimate_hurst(bin_trace(high, 1e-3)).h_hat;
    const double h_low = estimate_hurst(bin_trace(low, 1e-3)).h_hat;
    CHECK(h_high > 0.82);
    CHECK(h_low > 0.55);
    CHECK(h_low < 0.78);
    CHECK(h_high > h_low);
}
