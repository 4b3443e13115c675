#include "doctest.h"

#include <cmath>

#include "nlsw/problems.hpp"

using namespace nlsw;

TEST_CASE("disk problem pointwise values") {
    auto p = example1();
    CHECK(p.w.value(1.0, 1.0).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(p.w.value(1.0, 1.0).imag() == 0.0);
    // u(0.5, 0.5, 0) = 20 * X(0.5)^2 = 20 * 0.125^2 = 0.3125
    cplx u = p.exact.value(0.5, 0.5, 0.0);
    CHECK(u.real() == doctest::Approx(0.3125).epsilon(1e-14));
    CHECK(u.imag() == doctest::Approx(0.0).epsilon(1e-14));
    // u_t(.,0) = 160 i X(x) X(y)
    cplx u1 = p.u1.value(0.5, 0.5);
    CHECK(u1.real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(u1.imag() == doctest::Approx(160.0 * 0.125 * 0.125).epsilon(1e-13));
    CHECK(!p.homogeneous_boundary);
    CHECK(!p.zero_source);
    REQUIRE(p.source.has_value());
}

TEST_CASE("square problem pointwise values") {
    auto p = example2();
    CHECK(p.exact.value(0.5, 0.5, 0.0).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.exact.value(0.0, 0.37, 1.3)) <= 1e-15);
    CHECK(std::abs(p.exact.value(0.41, 1.0, 0.2)) <= 1e-15);
    // |u| is conserved pointwise: phase rotation only
    CHECK(std::abs(p.exact.value(0.3, 0.7, 2.1)) ==
          doctest::Approx(std::abs(p.exact.value(0.3, 0.7, 0.0))).epsilon(1e-14));
    // w(center) = -(sqrt(2) pi + 1)
    CHECK(p.w.value(0.5, 0.5).real() ==
          doctest::Approx(-(std::sqrt(2.0) * M_PI + 1.0)).epsilon(1e-14));
    CHECK(p.homogeneous_boundary);
    CHECK(p.zero_source);
    CHECK(!p.source.has_value());
}

TEST_CASE("initial data agree with the exact solution at t = 0") {
    for (auto p : {example1(), example2()}) {
        for (int k = 1; k <= 200; ++k) {
            double x = detail::halton(k, 2), y = detail::halton(k, 3);
            if (const auto* disk = std::get_if<Disk>(&p.domain)) {
                x = disk->center.x + (2.0 * x - 1.0) * disk->radius;
                y = disk->center.y + (2.0 * y - 1.0) * disk->radius;
                if (std::hypot(x - disk->center.x, y - disk->center.y) >= disk->radius) continue;
            }
            CHECK(std::abs(p.u0.value(x, y) - p.exact.value(x, y, 0.0)) <= 1e-14);
            // time derivative at 0 via high-order central difference
            double s = 1e-5;
            cplx fd = (p.exact.value(x, y, s) - p.exact.value(x, y, -s)) / (2.0 * s);
            CHECK(std::abs(p.u1.value(x, y) - fd) <= 5e-6);
        }
    }
}

TEST_CASE("square problem boundary data vanish") {
    auto p = example2();
    for (int k = 1; k <= 50; ++k) {
        double s = detail::halton(k, 2), t = 3.0 * detail::halton(k, 3);
        CHECK(std::abs(p.boundary.value(s, 0.0, t)) <= 1e-14);
        CHECK(std::abs(p.boundary.value(s, 1.0, t)) <= 1e-14);
        CHECK(std::abs(p.boundary.value(0.0, s, t)) <= 1e-14);
        CHECK(std::abs(p.boundary.value(1.0, s, t)) <= 1e-14);
    }
}

TEST_CASE("finite-difference residual check passes for both problems") {
    std::vector<double> times = {0.1, 0.5, 1.0, 2.0};
    auto r1 = residual_check(example1(), 40, times);
    CHECK(r1.pass);
    CHECK(r1.max_residual <= 1e-4);
    auto r2 = residual_check(example2(), 40, times);
    CHECK(r2.pass);
    CHECK(r2.max_residual <= 1e-4);
}

TEST_CASE("residual check detects a corrupted source term") {
    auto p = example1();
    auto g = *p.source;
    TimeScalarField bad;
    bad.value = [g](double x, double y, double t) { return g.value(x, y, t) + cplx{1.0, 0.0}; };
    p.source = bad;
    auto r = residual_check(p, 20, {0.5});
    CHECK(!r.pass);
    CHECK(r.max_residual == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("residual scales quadratically with the finite-difference step") {
    // second-order central differences: residual ~ s^2, so shrinking the step
    // 10x shrinks the residual about 100x
    auto p = example1();
    auto coarse = residual_check(p, 20, {0.7}, 1.0, 1e-3);
    auto fine = residual_check(p, 20, {0.7}, 1.0, 1e-4);
    CHECK(fine.max_residual <= 5e-5);
    double ratio = coarse.max_residual / fine.max_residual;
    CHECK(ratio == doctest::Approx(100.0).epsilon(0.2));
}
