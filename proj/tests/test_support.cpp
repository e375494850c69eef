#include <catch2/catch_amalgamated.hpp>

#include <atomic>

#include "zeromode/fitting.hpp"
#include "zeromode/parallel.hpp"
#include "zeromode/sampling.hpp"

using namespace zeromode;

TEST_CASE("halton base-2 prefix", "[support]") {
    CHECK(halton(1, 2) == 0.5);
    CHECK(halton(2, 2) == 0.25);
    CHECK(halton(3, 2) == 0.75);
    CHECK(halton(4, 2) == 0.125);
    CHECK(halton(1, 3) == Catch::Approx(1.0 / 3.0));
    CHECK(halton(2, 3) == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("ball points live in the ball and are seed-deterministic", "[support]") {
    const auto a = ball_points(50, 5.0, 7);
    const auto b = ball_points(50, 5.0, 7);
    const auto c = ball_points(50, 5.0, 8);
    REQUIRE(a.size() == 50);
    for (const Vec3& x : a) CHECK(norm(x) <= 5.0 + 1e-12);
    bool identical = true, differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        identical = identical && norm(a[i] - b[i]) == 0.0;
        differs = differs || norm(a[i] - c[i]) > 1e-12;
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("sphere points are unit and spread", "[support]") {
    const auto pts = sphere_points(64, 3);
    for (const Vec3& u : pts) CHECK(std::abs(norm(u) - 1.0) <= 1e-12);
    Vec3 mean{};
    for (const Vec3& u : pts) mean = mean + (1.0 / 64.0) * u;
    CHECK(norm(mean) <= 0.2);
}

TEST_CASE("loglog fit recovers a power law", "[support]") {
    std::vector<double> xs, ys;
    for (double x : {10.0, 20.0, 40.0, 80.0}) {
        xs.push_back(x);
        ys.push_back(3.0 * std::pow(x, -2.0));
    }
    const LogLogFit fit = fit_loglog(xs, ys);
    CHECK(fit.slope == Catch::Approx(-2.0).margin(1e-12));
    CHECK(fit.intercept == Catch::Approx(std::log(3.0)).margin(1e-12));
    CHECK(fit.residual_rms <= 1e-12);
    CHECK(fit.points_used == 4);

    // non-positive samples are excluded, not fatal
    xs.push_back(160.0);
    ys.push_back(0.0);
    const LogLogFit fit2 = fit_loglog(xs, ys);
    CHECK(fit2.points_excluded == 1);
    CHECK(fit2.points_used == 4);

    CHECK_THROWS_AS(fit_loglog({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("parallel_for covers each index once and matches serial", "[support]") {
    const std::size_t n = 1000;
    std::vector<int> hits(n, 0);
    std::atomic<int> total{0};
    parallel_for(n, 4, [&](std::size_t i) {
        hits[i] += 1;
        total.fetch_add(1);
    });
    CHECK(total.load() == static_cast<int>(n));
    for (int h : hits) CHECK(h == 1);

    std::vector<double> serial(n), threaded(n);
    auto work = [](std::size_t i) { return std::sin(0.001 * static_cast<double>(i * i)); };
    parallel_for(n, 1, [&](std::size_t i) { serial[i] = work(i); });
    parallel_for(n, 8, [&](std::size_t i) { threaded[i] = work(i); });
    CHECK(serial == threaded);
}
