#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "atomcav/physics.hpp"

using namespace atomcav;

TEST_CASE("cooperativity matches direct evaluation") {
    CHECK(cooperativity(3.4, 2.6, 1.1) == doctest::Approx(2.020979).epsilon(1e-6));
    CHECK(cooperativity(1.0, 0.5, 1.0) == doctest::Approx(1.0));
    CHECK(cooperativity(2.0, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(cooperativity(0.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(cooperativity(1.0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("default parameter set gives cooperativity near 2") {
    const CavityParams cav = CavityParams::paper_2024();
    const double c = cooperativity(cav.g0_max_MHz, cav.kappa_MHz, cav.gamma_MHz);
    CHECK(c >= 1.95);
    CHECK(c <= 2.05);
}

TEST_CASE("transverse coupling factor") {
    CHECK(transverse_coupling_factor(0.0, 45.3) == doctest::Approx(1.0));
    CHECK(transverse_coupling_factor(45.3, 45.3) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-12));
    CHECK(transverse_coupling_factor(1.0, 45.3) ==
          doctest::Approx(0.9995128106537517).epsilon(1e-12));
    CHECK_THROWS_AS(transverse_coupling_factor(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(transverse_coupling_factor(-1.0, 45.3), std::domain_error);
}

TEST_CASE("transverse factor is non-increasing in the offset") {
    std::mt19937_64 gen(123);
    std::uniform_real_distribution<double> r_dist(0.0, 200.0);
    std::uniform_real_distribution<double> w_dist(0.1, 100.0);
    for (int i = 0; i < 2000; ++i) {
        const double w = w_dist(gen);
        double r1 = r_dist(gen), r2 = r_dist(gen);
        if (r1 > r2) std::swap(r1, r2);
        CHECK(transverse_coupling_factor(r1, w) >= transverse_coupling_factor(r2, w));
    }
}

TEST_CASE("axial coupling factor at the marked displacements") {
    CHECK(axial_coupling_factor(0.0, 386.8) == doctest::Approx(1.0));
    CHECK(axial_coupling_factor(193.4, 386.8) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(axial_coupling_factor(56.0, 386.8) ==
          doctest::Approx(0.898334650954709).epsilon(1e-12));
    CHECK_THROWS_AS(axial_coupling_factor(1.0, 0.0), std::domain_error);
}

TEST_CASE("axial factor is even, periodic and bounded") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> x_dist(-2000.0, 2000.0);
    const double cycle = 386.8;
    for (int i = 0; i < 5000; ++i) {
        const double x = x_dist(gen);
        const double f = axial_coupling_factor(x, cycle);
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0);
        CHECK(axial_coupling_factor(-x, cycle) == doctest::Approx(f).epsilon(1e-12));
        CHECK(axial_coupling_factor(x + cycle, cycle) == doctest::Approx(f).epsilon(1e-9));
    }
}

TEST_CASE("beat decoupling distance") {
    // true D2 line against the lock beam
    CHECK(beat_decoupling_distance_um(851.4, 852.347) ==
          doctest::Approx(191.5755638331573).epsilon(1e-12));
    CHECK(2.0 * beat_decoupling_distance_um(851.4, 852.347) ==
          doctest::Approx(383.151).epsilon(1e-4));
    CHECK(beat_decoupling_distance_um(800.0, 1600.0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK_THROWS_AS(beat_decoupling_distance_um(852.0, 852.0), std::domain_error);
}

TEST_CASE("site coupling combines both factors") {
    const CavityParams cav = CavityParams::paper_2024();
    CHECK(site_coupling_MHz(cav, {0, 0.0, 0.0}) == doctest::Approx(3.4));
    CHECK(site_coupling_MHz(cav, {1, 193.4, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(site_coupling_MHz(cav, {2, 0.0, 45.3}) ==
          doctest::Approx(3.4 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("site coupling never exceeds the on-axis maximum") {
    const CavityParams cav = CavityParams::paper_2024();
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> x_dist(-500.0, 500.0);
    std::uniform_real_distribution<double> r_dist(0.0, 150.0);
    for (int i = 0; i < 5000; ++i) {
        const double g = site_coupling_MHz(cav, {i, x_dist(gen), r_dist(gen)});
        REQUIRE(g >= 0.0);
        REQUIRE(g <= cav.g0_max_MHz);
    }
}

TEST_CASE("collective coupling examples") {
    CHECK(effective_collective_coupling_MHz({2.62, 2.62, 2.62}) ==
          doctest::Approx(4.537973115830459).epsilon(1e-12));
    CHECK(effective_collective_coupling_MHz({}) == 0.0);
    CHECK(effective_collective_coupling_MHz({3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(effective_collective_coupling_MHz({1.0, -0.5}), std::domain_error);
}

TEST_CASE("uniform collective coupling equals g sqrt(N)") {
    std::mt19937_64 gen(17);
    std::uniform_int_distribution<int> n_dist(1, 64);
    std::uniform_int_distribution<int> exp_dist(-8, 8);
    std::uniform_real_distribution<double> g_dist(0.01, 10.0);
    for (int i = 0; i < 500; ++i) {
        const int n = n_dist(gen);
        // power-of-two couplings make both routes bit-identical
        const double g2 = std::ldexp(1.0, exp_dist(gen));
        const std::vector<double> uniform2(static_cast<std::size_t>(n), g2);
        CHECK(effective_collective_coupling_MHz(uniform2) ==
              g2 * std::sqrt(static_cast<double>(n)));

        const double g = g_dist(gen);
        const std::vector<double> uniform(static_cast<std::size_t>(n), g);
        CHECK(effective_collective_coupling_MHz(uniform) /
                  (g * std::sqrt(static_cast<double>(n))) ==
              doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("collective coupling is permutation-invariant and grows under append") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> g_dist(0.0, 5.0);
    std::uniform_int_distribution<int> n_dist(1, 40);
    for (int i = 0; i < 500; ++i) {
        std::vector<double> gs(static_cast<std::size_t>(n_dist(gen)));
        for (double& g : gs) g = g_dist(gen);

        const double base = effective_collective_coupling_MHz(gs);
        std::vector<double> shuffled = gs;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        CHECK(effective_collective_coupling_MHz(shuffled) ==
              doctest::Approx(base).epsilon(1e-13));

        std::vector<double> appended = gs;
        appended.push_back(g_dist(gen));
        CHECK(effective_collective_coupling_MHz(appended) >= base);
    }
}

TEST_CASE("tweezer geometry spans the documented extent") {
    const TweezerParams tw = TweezerParams::paper_2024();
    CHECK(tw.total_extent_um() == doctest::Approx(166.14).epsilon(1e-12));
    CHECK(tw.site_position_um(0) == doctest::Approx(-83.07));
    CHECK(tw.site_position_um(39) == doctest::Approx(83.07));
    CHECK(tw.site_position_um(19) == doctest::Approx(-2.13));
    CHECK(tw.site_position_um(20) == doctest::Approx(2.13));
    CHECK_THROWS_AS(tw.site_position_um(40), std::domain_error);
}

TEST_CASE("parameter invariants are enforced") {
    CavityParams cav = CavityParams::paper_2024();
    CHECK_NOTHROW(cav.validate());
    cav.lambda_lock_nm = cav.lambda_probe_nm;
    CHECK_THROWS_AS(cav.validate(), std::domain_error);
    cav = CavityParams::paper_2024();
    cav.finesse = 0.5;
    CHECK_THROWS_AS(cav.validate(), std::domain_error);

    TweezerParams tw = TweezerParams::paper_2024();
    CHECK_NOTHROW(tw.validate());
    tw.n_traps = 0;
    CHECK_THROWS_AS(tw.validate(), std::domain_error);
}

TEST_CASE("position jitter is off at sigma zero and unbiased otherwise") {
    RngStream rng(1234, 0);
    const AtomSite site{0, 10.0, 2.0};
    const AtomSite same = apply_position_jitter(site, 0.0, rng);
    CHECK(same.axial_x_um == site.axial_x_um);
    CHECK(same.transverse_r_um == site.transverse_r_um);

    double mean_x = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const AtomSite j = apply_position_jitter(site, 0.5, rng);
        REQUIRE(j.transverse_r_um >= 0.0);
        mean_x += j.axial_x_um;
    }
    CHECK(mean_x / n == doctest::Approx(10.0).epsilon(1e-3));
}
