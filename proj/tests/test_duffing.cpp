#include "hillstab/duffing.hpp"
#include "hillstab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace hillstab;
namespace duf = hillstab::duffing;

TEST_CASE("ultimate_bound values") {
    CHECK(duf::ultimate_bound(1, 2, 3) == doctest::Approx(3).epsilon(1e-15));
    CHECK(duf::ultimate_bound(4, 1, 5) == doctest::Approx(5).epsilon(1e-15));
    CHECK(duf::ultimate_bound(1, 2, 0) == 0);
    CHECK_THROWS_AS(duf::ultimate_bound(0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(duf::ultimate_bound(1, 0, 1), std::domain_error);
}

TEST_CASE("difference_ceiling") {
    const duf::DuffingParams dp(1, 2, 1, 2);
    CHECK(duf::difference_ceiling(dp, 0) == 0);
    CHECK(duf::difference_ceiling(dp, 2) == doctest::Approx(12).epsilon(1e-15));

    SUBCASE("reproduces the two ultimate-bound branch cases") {
        Rng rng(41);
        for (int i = 0; i < 1000; ++i) {
            const double b = rng.log_uniform(0.1, 10);
            const double c = rng.log_uniform(0.1, 10);
            const double a = rng.log_uniform(0.1, 10);
            const double p = rng.uniform(0.5, 4);
            const double fbound = rng.uniform(0, 5);
            const duf::DuffingParams d(b, c, a, p);
            const double m = duf::ultimate_bound(b, c, fbound);
            const double big_a = duf::difference_ceiling(d, m);
            if (c >= 2 * std::sqrt(b)) {
                CHECK(big_a == doctest::Approx((p + 1) * a * std::pow(fbound / b, p))
                                   .epsilon(1e-10));
            } else {
                CHECK(big_a == doctest::Approx((p + 1) * a *
                                               std::pow(2 * fbound / (c * std::sqrt(b)), p))
                                   .epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("convergence_threshold") {
    SUBCASE("branches coincide at c = 2 sqrt(b)") {
        const duf::DuffingParams dp(1, 2, 1, 2);
        CHECK(duf::convergence_threshold(dp) ==
              doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-14));
    }
    SUBCASE("heavy damping branch") {
        const duf::DuffingParams dp(1, 4, 1, 2);
        CHECK(duf::convergence_threshold(dp) ==
              doctest::Approx(4 / std::sqrt(3.0)).epsilon(1e-14));
    }
    SUBCASE("linear case is unrestricted") {
        const duf::DuffingParams dp(1, 2, 0, 2);
        CHECK(std::isinf(duf::convergence_threshold(dp)));
    }
    SUBCASE("branch continuity at c = 2 sqrt(b)") {
        Rng rng(42);
        for (int i = 0; i < 1000; ++i) {
            const double b = rng.log_uniform(0.1, 10);
            const double a = rng.log_uniform(0.1, 10);
            const double p = rng.uniform(0.5, 4);
            const double c = 2 * std::sqrt(b);
            const duf::DuffingParams dp(b, c, a, p);
            const double denom = std::pow(a * (p + 1), 1 / p);
            const double first = b * std::pow(c, 2 / p) / denom;
            CHECK(duf::convergence_threshold(dp) ==
                  doctest::Approx(first).epsilon(1e-10));
        }
    }
    SUBCASE("crossing the threshold flips certification of the ceiling") {
        // For p >= 1 the min of the two branches is the active one, so the
        // threshold is exact; for p < 1 it is conservative and only the
        // sufficient direction holds.
        Rng rng(43);
        for (int i = 0; i < 1000; ++i) {
            const double b = rng.log_uniform(0.2, 5);
            const double c = rng.log_uniform(0.2, 5);
            const double a = rng.log_uniform(0.2, 5);
            const double p = rng.uniform(0.5, 3);
            const duf::DuffingParams dp(b, c, a, p);
            const double thr = duf::convergence_threshold(dp);
            for (double side : {1 - 1e-6, 1 + 1e-6}) {
                const double fbound = thr * side;
                const double big_a =
                    duf::difference_ceiling(dp, duf::ultimate_bound(b, c, fbound));
                const bool certified = big_a < stability_threshold(b, c);
                if (side < 1)
                    CHECK(certified);
                else if (p >= 1)
                    CHECK_FALSE(certified);
            }
        }
    }
}

TEST_CASE("forcing respects its declared bound") {
    Rng rng(44);
    const duf::Forcing cosine(duf::CosineForcing{1.5, 2.0, 0.3});
    CHECK(cosine.bound() == doctest::Approx(1.5));
    for (int i = 0; i < 1000; ++i)
        CHECK(std::abs(cosine(rng.uniform(0, 100))) <= cosine.bound() * (1 + 1e-15));

    const duf::Forcing pw(CoefficientSignal({0, 1, 2, 5}, {0.5, -1.25, 0.75}));
    CHECK(pw.bound() == doctest::Approx(1.25));
    for (int i = 0; i < 1000; ++i)
        CHECK(std::abs(pw(rng.uniform(0, 5))) <= pw.bound());
    CHECK(pw(1.5) == -1.25);

    CHECK(duf::Forcing::zero().bound() == 0);
    CHECK(duf::Forcing::zero()(3.7) == 0);
}

TEST_CASE("simulate_pair basics") {
    const duf::DuffingParams dp(1, 2, 1, 2);
    const duf::Forcing f(duf::CosineForcing{0.5, 1.0, 0});

    SUBCASE("identical initial states give an identically zero gap") {
        const auto run = duf::simulate_pair(dp, f, {1, 0, 0}, {1, 0, 0}, 10, 5e-3, 10);
        REQUIRE_FALSE(run.diverged);
        for (double g : run.gap) CHECK(g == 0);
    }
    SUBCASE("swapping the pair preserves the gap series bitwise") {
        const auto ab = duf::simulate_pair(dp, f, {1, 0, 0}, {-0.5, 0.7, 0}, 10, 5e-3, 10);
        const auto ba = duf::simulate_pair(dp, f, {-0.5, 0.7, 0}, {1, 0, 0}, 10, 5e-3, 10);
        REQUIRE(ab.gap.size() == ba.gap.size());
        for (std::size_t i = 0; i < ab.gap.size(); ++i) CHECK(ab.gap[i] == ba.gap[i]);
    }
    SUBCASE("certified forcing level contracts the pair") {
        REQUIRE(f.bound() < duf::convergence_threshold(dp));
        Rng rng(45);
        for (int trial = 0; trial < 3; ++trial) {
            const PhaseState s0{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
            const PhaseState s1{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
            const auto run = duf::simulate_pair(dp, f, s0, s1, 60, 5e-3, 10);
            REQUIRE_FALSE(run.diverged);
            CHECK(run.gap_fit.rate > 0);

            // Certified-rate consistency: measured coefficient ceiling below
            // the stability threshold implies at least half the Hill decay
            // rate on the gap amplitude.
            double m_obs = 0;
            for (std::size_t i = run.first.samples.size() / 2;
                 i < run.first.samples.size(); ++i) {
                m_obs = std::max(m_obs, std::abs(run.first.samples[i].u));
                m_obs = std::max(m_obs, std::abs(run.second.samples[i].u));
            }
            const double big_a = duf::difference_ceiling(dp, m_obs);
            if (big_a < stability_threshold(dp.b, dp.c)) {
                const double delta = decay_rate(SystemParams(dp.b, dp.c, big_a));
                CHECK(run.gap_fit.rate >= 0.5 * delta - 1e-6);
            }
        }
    }
    SUBCASE("unforced pair collapses to the origin") {
        const auto run = duf::simulate_pair(dp, duf::Forcing::zero(), {1.5, 0, 0},
                                            {-1, 0.5, 0}, 40, 5e-3, 10);
        REQUIRE_FALSE(run.diverged);
        CHECK(run.gap.back() < 1e-10);
        CHECK(std::abs(run.first.samples.back().u) < 1e-10);
        CHECK(std::abs(run.second.samples.back().u) < 1e-10);
    }
}

TEST_CASE("verify_ultimate_bound") {
    const duf::DuffingParams dp(1, 2, 1, 2);
    SUBCASE("cosine forcing amplitude 1 stays within the bound") {
        const duf::Forcing f(duf::CosineForcing{1.0, 1.0, 0});
        Rng rng(46);
        for (int trial = 0; trial < 3; ++trial) {
            const PhaseState s0{rng.uniform(-3, 3), rng.uniform(-3, 3), 0};
            const auto rep = duf::verify_ultimate_bound(dp, f, s0, 80, 5e-3, 10);
            REQUIRE_FALSE(rep.diverged);
            CHECK(rep.bound == doctest::Approx(1.0));
            CHECK(rep.within);
            CHECK(rep.trailing_max_abs_u <= 1 + 1e-3);
        }
    }
    SUBCASE("zero forcing decays to zero") {
        const auto rep = duf::verify_ultimate_bound(dp, duf::Forcing::zero(),
                                                    {2, -1, 0}, 80, 5e-3, 10);
        CHECK(rep.bound == 0);
        CHECK(rep.trailing_max_abs_u < 1e-6);
        CHECK(rep.within);
    }
    SUBCASE("stiff case respects the scaled bound") {
        const duf::DuffingParams stiff(25, 1, 1, 2);
        const duf::Forcing f(duf::CosineForcing{2.5, 2.0, 0});
        const auto rep = duf::verify_ultimate_bound(stiff, f, {0.5, 0, 0}, 60, 2e-3, 10);
        REQUIRE_FALSE(rep.diverged);
        CHECK(rep.bound == doctest::Approx(0.4 * 2.5).epsilon(1e-12));
        CHECK(rep.within);
    }
}
