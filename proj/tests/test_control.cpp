#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qoc/control.hpp"

using namespace qoc;

TEST_CASE("interpolation is linear and exact at nodes") {
    ControlGrid g(1.0, 2, 1);
    g.value(0, 0) = 0.0;
    g.value(1, 0) = 1.0;
    g.value(2, 0) = 0.5;
    CHECK(g.interpolate(0.25)[0] == doctest::Approx(0.5));
    CHECK(g.interpolate(0.0)[0] == 0.0);
    CHECK(g.interpolate(0.5)[0] == 1.0);
    CHECK(g.interpolate(1.0)[0] == 0.5);
    CHECK_THROWS_AS(g.interpolate(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(g.interpolate(1.1), std::invalid_argument);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ControlGrid r(2.0, 20, 3);
    for (auto& v : r.data()) v = unif(rng);
    for (int rep = 0; rep < 50; ++rep) {
        const double t = 2.0 * unif(rng);
        const int m = std::min(static_cast<int>(t / r.dt()), 19);
        const double theta = (t - r.node_time(m)) / r.dt();
        const auto out = r.interpolate(t);
        for (int k = 0; k < 3; ++k)
            CHECK(out[k] ==
                  doctest::Approx((1 - theta) * r.value(m, k) + theta * r.value(m + 1, k)));
    }
}

TEST_CASE("projection clamps, is idempotent, and contracts") {
    const BoxConstraint box = BoxConstraint::constant(2, -1.0, 1.0);
    ControlGrid g(1.0, 4, 2);
    g.value(0, 0) = 0.5;
    g.value(1, 0) = 2.0;
    g.value(2, 1) = -3.0;
    const ControlGrid p = project(g, box);
    CHECK(p.value(0, 0) == 0.5);
    CHECK(p.value(1, 0) == 1.0);
    CHECK(p.value(2, 1) == -1.0);
    CHECK(project(p, box).max_abs_diff(p) == 0.0);

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (int rep = 0; rep < 25; ++rep) {
        ControlGrid a(1.0, 8, 2), b(1.0, 8, 2);
        for (auto& v : a.data()) v = unif(rng);
        for (auto& v : b.data()) v = unif(rng);
        CHECK(project(a, box).max_abs_diff(project(b, box)) <= a.max_abs_diff(b) + 1e-15);
    }
}

TEST_CASE("sinc envelope endpoints, peak, and center branch") {
    const double horizon = 1.5, c = 0.7;
    for (int q : {3, 7}) {
        CHECK(std::abs(sinc_envelope(0.0, horizon, c, q)) <= 1e-14);
        CHECK(std::abs(sinc_envelope(horizon, horizon, c, q)) <= 1e-14);
        CHECK(sinc_envelope(horizon / 2, horizon, c, q) == c);  // the y = 0 branch
        double peak = 0.0;
        for (int i = 0; i <= 600; ++i)
            peak = std::max(peak, sinc_envelope(horizon * i / 600.0, horizon, c, q));
        CHECK(peak == doctest::Approx(c));
    }
    // degenerate interval at the ends: projection pins the value to 0
    const BoxConstraint box = BoxConstraint::symmetric_sinc(1, horizon, c, 3);
    ControlGrid g(horizon, 10, 1);
    for (auto& v : g.data()) v = 5.0;
    const ControlGrid p = project(g, box);
    CHECK(p.value(0, 0) == 0.0);
    CHECK(p.value(10, 0) == 0.0);
    CHECK(bv_metric(p) == 0.0);
}

TEST_CASE("shape function") {
    CHECK(shape_s(0.75, 1.5, 25.0) == 1.0);
    CHECK(shape_s(0.0, 1.5, 25.0) == doctest::Approx(std::exp(6.25)));
    for (int i = 0; i <= 10; ++i) {
        const double t = 1.5 * i / 10.0;
        CHECK(shape_s(t, 1.5, 25.0) == doctest::Approx(shape_s(1.5 - t, 1.5, 25.0)));
        CHECK(shape_s(t, 1.5, 25.0) >= 1.0);
    }
}

TEST_CASE("bv metric") {
    ControlGrid g(1.0, 4, 2);
    CHECK(bv_metric(g) == 0.0);
    g.value(0, 0) = 1.0;
    g.value(0, 1) = -2.0;
    g.value(4, 0) = 0.0;
    g.value(4, 1) = 0.5;
    CHECK(bv_metric(g) == doctest::Approx(3.5));
}

TEST_CASE("csv round trip") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    ControlGrid g(2.5, 17, 3);
    for (auto& v : g.data()) v = unif(rng);

    std::stringstream ss;
    write_control_csv(g, ss);
    const ControlGrid back = read_control_csv(ss);
    CHECK(back.segments() == g.segments());
    CHECK(back.components() == g.components());
    CHECK(back.horizon() == doctest::Approx(g.horizon()).epsilon(1e-16));
    CHECK(back.max_abs_diff(g) == 0.0);  // 17 significant digits are lossless
}
