#include "hillstab/resonance.hpp"
#include "hillstab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hillstab;
namespace res = hillstab::resonance;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("build populates derived quantities") {
    SUBCASE("omega = 2") {
        const auto sys = res::build(2);
        CHECK(sys.period == doctest::Approx(3 * kPi / 4).epsilon(1e-15));
        CHECK(sys.params(0.1).C == doctest::Approx(3).epsilon(1e-15));
        CHECK(sys.c0 == doctest::Approx(0.5883616).epsilon(1e-6));
        CHECK(sys.signal(0.1) == 4);
        CHECK(sys.signal(1.0) == 1);
        CHECK(sys.signal(0.1 + sys.period) == 4);  // periodic extension
    }
    SUBCASE("omega = e") {
        const double e = std::exp(1.0);
        const auto sys = res::build(e);
        CHECK(sys.c0 == doctest::Approx(4 * e / (kPi * (1 + e))).epsilon(1e-14));
        CHECK(sys.c0 == doctest::Approx(0.9308127).epsilon(1e-6));
    }
    SUBCASE("degenerate limit") {
        const auto sys = res::build(1 + 1e-8);
        CHECK(sys.params(0).C < 3e-8);
        CHECK(sys.c0 < 1e-8);
        CHECK(sys.c0 > 0);
    }
    SUBCASE("omega <= 1 rejected") {
        CHECK_THROWS_AS(res::build(1.0), std::domain_error);
        CHECK_THROWS_AS(res::build(0.5), std::domain_error);
    }
    SUBCASE("derived Hill parameters") {
        const auto sys = res::build(1.7);
        const SystemParams p = sys.params(0.4);
        CHECK(p.b == doctest::Approx(1 + 0.04).epsilon(1e-15));
        CHECK(p.c == 0.4);
        CHECK(p.C == doctest::Approx(1.7 * 1.7 - 1).epsilon(1e-15));
        const auto a = sys.hill_signal();
        CHECK(a.min_value() == 0);
        CHECK(a.max_value() == doctest::Approx(p.C).epsilon(1e-15));
    }
}

TEST_CASE("exact_v boundary values and growth") {
    SUBCASE("initial data") {
        const auto vd = res::exact_v(2, 0);
        CHECK(vd.value == 1);
        CHECK(vd.deriv == 0);
    }
    SUBCASE("C1 matching at the first switch") {
        const double w = 2;
        const double ts = kPi / (2 * w);
        const auto vd = res::exact_v(w, ts);
        CHECK(std::abs(vd.value) < 1e-14);
        CHECK(vd.deriv == doctest::Approx(-w).epsilon(1e-14));
    }
    SUBCASE("|v(kT)| = omega^k") {
        const double w = 1.5;
        const double T = kPi / (2 * w) + kPi / 2;
        for (int k = 0; k <= 10; ++k) {
            const auto vd = res::exact_v(w, k * T);
            CHECK(std::abs(vd.value) ==
                  doctest::Approx(std::pow(w, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("exact_v is C1 at every breakpoint") {
    Rng rng(31);
    for (int i = 0; i < 1000; ++i) {
        const double w = 1 + rng.log_uniform(0.01, 3);
        const double ts = kPi / (2 * w);
        const double T = ts + kPi / 2;
        for (int k = 0; k < 3; ++k) {
            for (double joint : {k * T, k * T + ts}) {
                if (joint == 0) continue;
                const double lo = std::nextafter(joint, 0.0);
                const double hi = std::nextafter(joint, 1e30);
                const auto a = res::exact_v(w, lo);
                const auto b = res::exact_v(w, hi);
                const double scale = std::max(1.0, std::pow(w, k + 1)) * w;
                CHECK(std::abs(a.value - b.value) < 1e-12 * scale);
                CHECK(std::abs(a.deriv - b.deriv) < 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("exact_v satisfies v'' + alpha v = 0 inside pieces") {
    const double fd_h = 1e-4;
    Rng rng(32);
    for (int i = 0; i < 30; ++i) {
        const double w = 1 + rng.log_uniform(0.05, 2);
        const auto sys = res::build(w);
        const double ts = kPi / (2 * w);
        for (int k = 0; k < 3; ++k) {
            for (double frac : {0.2, 0.5, 0.8}) {
                for (int piece = 0; piece < 2; ++piece) {
                    const double t = k * sys.period +
                                     (piece == 0 ? frac * ts
                                                 : ts + frac * (sys.period - ts));
                    if (t < fd_h) continue;
                    const double vm = res::exact_v(w, t - fd_h).value;
                    const double v0 = res::exact_v(w, t).value;
                    const double vp = res::exact_v(w, t + fd_h).value;
                    const double vdd = (vp - 2 * v0 + vm) / (fd_h * fd_h);
                    const double residual = vdd + sys.signal(t) * v0;
                    CHECK(std::abs(residual) < 1e-6 * std::max(1.0, std::abs(v0)) * w * w);
                }
            }
        }
    }
}

TEST_CASE("damped_solution and growth factor") {
    SUBCASE("c = 0 reduces to v") {
        Rng rng(33);
        for (int i = 0; i < 200; ++i) {
            const double w = 1 + rng.uniform(0.01, 2);
            const double t = rng.uniform(0, 20);
            CHECK(res::damped_solution(w, 0, t) == res::exact_v(w, t).value);
        }
    }
    SUBCASE("omega = 2, c = 0.5 grows at the closed-form factor") {
        const double w = 2, c = 0.5;
        const double T = 3 * kPi / 4;
        const double factor = res::growth_factor(w, c);
        CHECK(factor == doctest::Approx(2 * std::exp(-c * T / 2)).epsilon(1e-14));
        CHECK(factor == doctest::Approx(1.1097098).epsilon(1e-6));
        for (int k = 0; k <= 8; ++k) {
            CHECK(std::abs(res::damped_solution(w, c, k * T)) ==
                  doctest::Approx(std::pow(factor, k)).epsilon(1e-11));
        }
    }
    SUBCASE("factor exactly one at c0") {
        for (double w : {1.3, 2.0, 3.5}) {
            const auto sys = res::build(w);
            CHECK(res::growth_factor(w, sys.c0) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("sharpness_ratio approaches pi from above") {
    CHECK(res::sharpness_ratio(0.01) == doctest::Approx(3.1574).epsilon(1e-3));
    CHECK(std::abs(res::sharpness_ratio(0.001) - kPi) / kPi < 0.002);
    const double r1 = res::sharpness_ratio(0.1);
    const double r2 = res::sharpness_ratio(0.01);
    const double r3 = res::sharpness_ratio(0.001);
    CHECK(r1 > r2);
    CHECK(r2 > r3);
    CHECK(r3 > kPi);
    Rng rng(34);
    for (int i = 0; i < 200; ++i) CHECK(res::sharpness_ratio(rng.log_uniform(1e-4, 1)) > kPi);
}

TEST_CASE("verify_unbounded matches the closed form") {
    SUBCASE("omega = 2, c = 0.5, 20 periods") {
        const auto rep = res::verify_unbounded(2, 0.5, 20);
        CHECK(rep.factors.size() == 20);
        CHECK(rep.closed_form_factor == doctest::Approx(1.1097098).epsilon(1e-6));
        CHECK(rep.max_factor_deviation < 1e-9);
        CHECK(rep.grew);
    }
    SUBCASE("c above c0 decays") {
        const auto rep = res::verify_unbounded(2, 0.7, 20);
        CHECK(rep.closed_form_factor == doctest::Approx(0.8767610).epsilon(1e-6));
        CHECK(rep.max_factor_deviation < 1e-9);
        CHECK_FALSE(rep.grew);
    }
    SUBCASE("undamped factor is omega") {
        const auto rep = res::verify_unbounded(2, 0, 10);
        CHECK(rep.closed_form_factor == 2);
        CHECK(rep.max_factor_deviation < 1e-11);
    }
}

TEST_CASE("growth only happens when certification fails") {
    Rng rng(35);
    for (int i = 0; i < 500; ++i) {
        const double w = 1 + rng.log_uniform(0.01, 2);
        const auto sys = res::build(w);
        const double c = rng.uniform(0, 1) * sys.c0;
        if (c == 0) continue;
        const double factor = res::growth_factor(w, c);
        REQUIRE(factor > 1);  // c below c0 always grows
        CHECK_FALSE(certify(sys.params(c)).holds_main);
    }
}

TEST_CASE("sharpness_sweep rows") {
    const auto rows = res::sharpness_sweep({0.1, 0.01});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].omega == doctest::Approx(1.1));
    CHECK(rows[0].ratio == doctest::Approx(res::sharpness_ratio(0.1)));
    CHECK(rows[1].C == doctest::Approx(1.01 * 1.01 - 1));
}
