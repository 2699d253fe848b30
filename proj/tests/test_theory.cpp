#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "eeesim/theory.hpp"

using namespace eeesim;

namespace {

nlohmann::json load_fixture() {
    const std::string path = std::string(EEESIM_DATA_DIR) + "/fixtures/reference_workloads.json";
    std::ifstream in(path);
    REQUIRE(in);
    nlohmann::json j;
    in >> j;
    return j;
}

// back-derive n_bar from the workload's quiet-time fraction
TheoryInputs inputs_from_workload(const nlohmann::json& defaults, const nlohmann::json& w) {
    TheoryInputs in;
    in.window_T = defaults["t_ms"].get<double>() * 1e-3;
    in.t_prime = defaults["t_prime_ms"].get<double>() * 1e-3;
    in.t_burst = defaults["t_b_ms"].get<double>() * 1e-3;
    in.t_trans = (defaults["t_s_ms"].get<double>() + defaults["t_w_ms"].get<double>()) * 1e-3;
    in.pw_on = defaults["pw_on_w"].get<double>();
    in.pw_off = defaults["pw_off_w"].get<double>();
    in.duration_L = defaults["duration_s"].get<double>();
    in.t_pack_bar = w["d_bar_bits"].get<double>() / defaults["f_bps"].get<double>();
    const double p_eee = w["p_eee"].get<double>();
    in.n_bar = (in.t_burst - in.t_trans - p_eee * in.t_burst) / in.t_pack_bar;
    in.u = w["u"].get<double>();
    in.tau_bar = w["tau_bar_theory_ms"].get<double>() * 1e-3;
    return in;
}

TheoryInputs default_inputs() {
    TheoryInputs in;
    in.n_bar = 13.3;
    in.t_pack_bar = 5.68e-6;
    in.u = 0.827;
    in.tau_bar = 3.8e-3;
    return in;
}

double u53(std::mt19937_64& eng) { return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53; }

} // namespace

TEST_CASE("p_eee_theory") {
    TheoryInputs in = default_inputs();

    SUBCASE("zero load leaves only the transition cost") {
        in.n_bar = 0.0;
        CHECK(p_eee_theory(in) == doctest::Approx(0.7815).epsilon(1e-9));
    }
    SUBCASE("reference load hits the published fraction") {
        CHECK(p_eee_theory(in) == doctest::Approx(0.706).epsilon(5e-4));
    }
    SUBCASE("saturation approaches zero") {
        in.n_bar = 137.5;
        CHECK(p_eee_theory(in) < 0.01);
        CHECK(p_eee_theory(in) > 0.0);
    }
    SUBCASE("overload rejected") {
        in.n_bar = 140.0;
        CHECK_THROWS_AS(p_eee_theory(in), std::domain_error);
    }
}

TEST_CASE("p_eeep_theory") {
    TheoryInputs in = default_inputs();

    SUBCASE("reference parameterization") {
        CHECK(p_eeep_theory(in) == doctest::Approx(0.813).epsilon(1e-3));
        CHECK(p_eeep_theory(in) / p_eee_theory(in) == doctest::Approx(1.15).epsilon(5e-3));
    }
    SUBCASE("nominal tail with T' -> T - T_B reduces to plain burst transmission") {
        in.t_prime = in.window_T - in.t_burst; // kappa = 1
        in.tau_bar = in.tau_bar_nominal();
        CHECK(p_eeep_theory(in) == doctest::Approx(p_eee_theory(in)).epsilon(1e-12));
    }
    SUBCASE("general form reduces to the simplified closed form at the nominal tail") {
        std::mt19937_64 eng(31);
        for (int i = 0; i < 200; ++i) {
            TheoryInputs r = in;
            r.n_bar = u53(eng) * 100.0;
            r.t_pack_bar = (2.0 + u53(eng) * 10.0) * 1e-6;
            r.t_prime = in.t_burst * (1 + static_cast<int>(u53(eng) * 98.0));
            if (r.t_burst <= r.t_trans + r.n_bar * r.t_pack_bar) continue;
            r.tau_bar = r.tau_bar_nominal();
            if (r.tau_bar > r.window_T - r.t_prime) continue;
            const double simplified =
                ((r.t_burst - r.n_bar * r.t_pack_bar) * (r.window_T / r.t_burst) -
                 r.t_trans * (r.t_prime / r.t_burst + 1.0)) /
                r.window_T;
            CHECK(p_eeep_theory(r) == doctest::Approx(simplified).epsilon(1e-12));
        }
    }
    SUBCASE("tail larger than the trailing interval is rejected") {
        in.tau_bar = 0.06; // > T - T' = 50 ms
        CHECK_THROWS_AS(p_eeep_theory(in), std::domain_error);
    }
}

TEST_CASE("efficiencies") {
    TheoryInputs in = default_inputs();

    SUBCASE("no load, no efficiency") {
        in.n_bar = 0.0;
        const Efficiencies e = efficiencies(in);
        CHECK(e.eta_on == 0.0);
        CHECK(e.eta_eee == 0.0);
        CHECK(e.eta_eeep == 0.0);
    }
    SUBCASE("reference workload matches the published percentages") {
        const Efficiencies e = efficiencies(in);
        CHECK(std::abs(e.eta_on - 0.07) < 0.01);
        CHECK(std::abs(e.eta_eee - 0.26) < 0.01);
        CHECK(std::abs(e.eta_eeep - 0.41) < 0.01);
    }
    SUBCASE("prediction always beats plain burst transmission under load") {
        for (double n = 1.0; n <= 137.0; n += 5.0) {
            in.n_bar = n;
            const Efficiencies e = efficiencies(in);
            CHECK(e.eta_eee < e.eta_eeep); // kappa < 1
        }
    }
}

TEST_CASE("load limits and optimal loads") {
    TheoryInputs in = default_inputs();

    SUBCASE("reference values") {
        const auto [lim_eee, lim_eeep] = load_limits(in);
        CHECK(lim_eee == 137);
        CHECK(lim_eeep == 156);
        const auto [star_eee, star_eeep] = optimal_loads(in);
        CHECK(star_eee == 43);
        CHECK(star_eeep == 39);
    }
    SUBCASE("free transitions push the limit to the unit capacity") {
        in.t_trans = 0.0;
        const auto [lim_eee, lim_eeep] = load_limits(in);
        const auto cap = static_cast<std::int64_t>(std::floor(in.t_burst / in.t_pack_bar));
        CHECK(lim_eee == cap);
        CHECK(lim_eeep == cap);
        const auto [star_eee, star_eeep] = optimal_loads(in);
        CHECK(star_eee == 0);
        CHECK(star_eeep == 0);
    }
    SUBCASE("kappa = 1 equalizes the limits") {
        in.t_prime = in.window_T - in.t_burst;
        const auto [lim_eee, lim_eeep] = load_limits(in);
        CHECK(lim_eee == lim_eeep);
    }
    SUBCASE("brute-force argmax agrees within flooring slack") {
        const auto [star_eee, star_eeep] = optimal_loads(in);
        std::int64_t best_eee = 1, best_eeep = 1;
        double best_eee_v = -1.0, best_eeep_v = -1.0;
        for (std::int64_t n = 1; n <= 170; ++n) {
            TheoryInputs p = in;
            p.n_bar = static_cast<double>(n);
            const Efficiencies e = efficiencies(p);
            if (e.eta_eee - e.eta_on > best_eee_v) {
                best_eee_v = e.eta_eee - e.eta_on;
                best_eee = n;
            }
            if (e.eta_eeep - e.eta_on > best_eeep_v) {
                best_eeep_v = e.eta_eeep - e.eta_on;
                best_eeep = n;
            }
        }
        CHECK(std::abs(best_eee - star_eee) <= 1);
        CHECK(std::abs(best_eeep - star_eeep) <= 1);
    }
}

TEST_CASE("efficiency bounds") {
    TheoryInputs in = default_inputs();

    SUBCASE("default ceilings") {
        const auto [b_eee, b_eeep] = efficiency_bounds(in);
        CHECK(b_eee == doctest::Approx(0.7815).epsilon(1e-9));
        CHECK(b_eeep == doctest::Approx(0.888565).epsilon(1e-9));
    }
    SUBCASE("kappa = 1 equalizes the ceilings") {
        in.t_prime = in.window_T - in.t_burst;
        const auto [b_eee, b_eeep] = efficiency_bounds(in);
        CHECK(b_eee == doctest::Approx(b_eeep).epsilon(1e-12));
    }
    SUBCASE("no admissible load breaks the ceiling") {
        const auto [b_eee, b_eeep] = efficiency_bounds(in);
        const auto [lim_eee, lim_eeep] = load_limits(in);
        for (double n = 0.5; n <= static_cast<double>(lim_eeep); n += 0.5) {
            TheoryInputs p = in;
            p.n_bar = n;
            const Efficiencies e = efficiencies(p);
            if (n <= static_cast<double>(lim_eee)) CHECK(e.eta_eee <= b_eee + 1e-12);
            CHECK(e.eta_eeep <= b_eeep + 1e-12);
        }
    }
}

TEST_CASE("mixing by the usage fraction") {
    SUBCASE("endpoints") {
        CHECK(mix_u(0.7, 0.8, 0.26, 0.41, 0.0).first == doctest::Approx(0.7));
        CHECK(mix_u(0.7, 0.8, 0.26, 0.41, 0.0).second == doctest::Approx(0.26));
        CHECK(mix_u(0.7, 0.8, 0.26, 0.41, 1.0).first == doctest::Approx(0.8));
        CHECK(mix_u(0.7, 0.8, 0.26, 0.41, 1.0).second == doctest::Approx(0.41));
    }
    SUBCASE("mixture stays inside the endpoints") {
        std::mt19937_64 eng(77);
        for (int i = 0; i < 300; ++i) {
            const double a = u53(eng), b = u53(eng), u = u53(eng);
            const double lo = std::min(a, b), hi = std::max(a, b);
            const auto [p, eta] = mix_u(a, b, a, b, u);
            CHECK(p >= lo - 1e-12);
            CHECK(p <= hi + 1e-12);
            CHECK(eta >= lo - 1e-12);
            CHECK(eta <= hi + 1e-12);
        }
    }
    CHECK_THROWS_AS(mix_u(0.5, 0.5, 0.5, 0.5, 1.5), std::invalid_argument);
}

TEST_CASE("energy from the quiet-time fraction") {
    const TheoryInputs in = default_inputs();
    CHECK(energy_from_quiet_fraction(0.0, in) == doctest::Approx(139.4).epsilon(1e-9));
    CHECK(energy_from_quiet_fraction(1.0, in) == doctest::Approx(10.6).epsilon(1e-9));
    // 200*(0.706*0.053 + 0.294*0.697), frozen by hand evaluation
    CHECK(energy_from_quiet_fraction(0.706, in) == doctest::Approx(48.4672).epsilon(1e-6));
    CHECK(std::abs(energy_from_quiet_fraction(0.706, in) - 48.5) < 0.1);
    CHECK(energy_from_quiet_fraction(0.795, in) == doctest::Approx(37.0).epsilon(3e-3));
    CHECK_THROWS_AS(energy_from_quiet_fraction(1.5, in), std::invalid_argument);
}

TEST_CASE("time gain") {
    CHECK(time_gain(0.7, 0.8, 0.0) == doctest::Approx(0.0));
    CHECK(time_gain(0.7, 0.7, 0.9) == doctest::Approx(0.0));
    const TheoryInputs in = default_inputs();
    const double tg = time_gain(p_eee_theory(in), p_eeep_theory(in), in.u);
    CHECK(tg > 0.12);
    CHECK(tg < 0.13);
    CHECK_THROWS_AS(time_gain(0.0, 0.5, 0.5), std::domain_error);
}

TEST_CASE("energy gain forms agree and match the reference values") {
    TheoryInputs in = default_inputs();

    SUBCASE("reference workload") {
        CHECK(energy_gain(in) == doctest::Approx(0.235).epsilon(2e-2));
        CHECK(std::abs(energy_gain(in) - 0.235) < 0.003);
        in.p_tau = 0.8;
        CHECK(std::abs(energy_gain(in) - 0.169) < 0.003);
    }
    SUBCASE("no usage, no gain") {
        in.u = 0.0;
        CHECK(energy_gain(in) == doctest::Approx(0.0));
    }
    SUBCASE("both closed forms agree on random admissible inputs") {
        std::mt19937_64 eng(55);
        int tested = 0;
        while (tested < 300) {
            TheoryInputs r;
            r.n_bar = u53(eng) * 120.0;
            r.t_pack_bar = (2.0 + u53(eng) * 10.0) * 1e-6;
            r.u = u53(eng);
            r.p_tau = u53(eng);
            r.tau_bar = u53(eng) * 0.04;
            if (r.t_burst <= r.t_trans + r.n_bar * r.t_pack_bar) continue;
            if (r.tau_bar * (1.0 + r.p_tau) > r.window_T - r.t_prime) continue;
            const auto [a, b] = energy_gain_forms(r);
            CHECK(std::abs(a - b) <= 1e-9);
            tested++;
        }
    }
}

TEST_CASE("energy gain is linear in the tail extension") {
    const TheoryInputs in = default_inputs();
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(0.1 * i);
    const auto sweep = eg_vs_ptau_sweep(in, grid);
    REQUIRE(sweep.size() == 9);

    SUBCASE("monotone decreasing, slope about -0.8 points per +10%") {
        for (std::size_t i = 1; i < sweep.size(); ++i) {
            const double diff = sweep[i].second - sweep[i - 1].second;
            CHECK(diff < 0.0);
            CHECK(std::abs(diff + 0.00835) < 0.0007); // frozen: -U*(tau/T)/denominator * 0.1
        }
    }
    SUBCASE("successive differences constant to 1e-9") {
        for (std::size_t i = 2; i < sweep.size(); ++i) {
            const double d1 = sweep[i - 1].second - sweep[i - 2].second;
            const double d2 = sweep[i].second - sweep[i - 1].second;
            CHECK(std::abs(d1 - d2) <= 1e-9);
        }
    }
    SUBCASE("zero tail makes the sweep flat") {
        TheoryInputs z = in;
        z.tau_bar = 0.0;
        const auto flat = eg_vs_ptau_sweep(z, grid);
        for (std::size_t i = 1; i < flat.size(); ++i)
            CHECK(flat[i].second == doctest::Approx(flat[0].second).epsilon(1e-12));
    }
}

TEST_CASE("always-on crosses the efficient policies in the stated order") {
    const TheoryInputs in = default_inputs();
    const auto [lim_eee, lim_eeep] = load_limits(in);

    std::int64_t last_pos_eee = 0, last_pos_eeep = 0;
    int sign_changes_eee = 0, sign_changes_eeep = 0;
    double prev_eee = 0.0, prev_eeep = 0.0;
    for (std::int64_t n = 1; n <= lim_eeep + 2; ++n) {
        TheoryInputs p = in;
        p.n_bar = static_cast<double>(n);
        const Efficiencies e = efficiencies(p);
        const double d_eee = e.eta_eee - e.eta_on;
        const double d_eeep = e.eta_eeep - e.eta_on;
        if (d_eee > 0.0) last_pos_eee = n;
        if (d_eeep > 0.0) last_pos_eeep = n;
        if (n > 1 && (d_eee > 0.0) != (prev_eee > 0.0)) sign_changes_eee++;
        if (n > 1 && (d_eeep > 0.0) != (prev_eeep > 0.0)) sign_changes_eeep++;
        prev_eee = d_eee;
        prev_eeep = d_eeep;
    }
    CHECK(sign_changes_eee == 1);
    CHECK(sign_changes_eeep == 1);
    CHECK(std::abs(last_pos_eee - lim_eee) <= 1);
    CHECK(std::abs(last_pos_eeep - lim_eeep) <= 1);
    CHECK(last_pos_eee < last_pos_eeep); // plain burst transmission crosses first
}

TEST_CASE("eta_eeep decreases as the leading interval grows") {
    TheoryInputs in = default_inputs();
    double prev = 1.0;
    for (std::int64_t tp_ms = 10; tp_ms <= 99; tp_ms += 1) {
        in.t_prime = static_cast<double>(tp_ms) * 1e-3;
        const double eta = efficiencies(in).eta_eeep;
        CHECK(eta < prev);
        prev = eta;
    }
    in.t_prime = in.window_T - in.t_burst; // kappa = 1
    CHECK(efficiencies(in).eta_eeep == doctest::Approx(efficiencies(in).eta_eee).epsilon(1e-12));
}

TEST_CASE("reference workloads reproduce the published table") {
    const nlohmann::json fx = load_fixture();
    const auto& defaults = fx["defaults"];
    for (const auto& w : fx["workloads"]) {
        INFO("workload ", w["id"].get<std::string>());
        const TheoryInputs in = inputs_from_workload(defaults, w);
        const BoundsReport r = bounds_report(in);
        const auto& exp = w["expected"];
        CHECK(r.p_eee == doctest::Approx(w["p_eee"].get<double>()).epsilon(1e-9));
        CHECK(std::abs(r.e_eee_j - exp["e_eee_j"].get<double>()) < 0.3);
        CHECK(std::abs(r.p_u - exp["p_u"].get<double>()) < 0.003);
        CHECK(std::abs(r.e_u_j - exp["e_u_j"].get<double>()) < 0.3);
        CHECK(std::abs(r.eg - exp["eg"].get<double>()) < 0.003);
        CHECK(r.p_u >= r.p_eee);
        CHECK(r.p_u <= r.p_eeep);
    }
}
