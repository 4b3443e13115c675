#include "doctest.h"

#include <cmath>

#include "nlsw/quadrature.hpp"

using namespace nlsw;

namespace {

// closed-form reference-triangle monomial integral: int x^a y^b = a! b! / (a+b+2)!
double monomial_integral(int a, int b) {
    double num = 1.0;
    for (int k = 2; k <= a; ++k) num *= k;
    for (int k = 2; k <= b; ++k) num *= k;
    double den = 1.0;
    for (int k = 2; k <= a + b + 2; ++k) den *= k;
    return num / den;
}

double quad_monomial(const TriangleQuadrature& rule, int a, int b) {
    double s = 0.0;
    for (const auto& q : rule.points) s += q.w * std::pow(q.l1, a) * std::pow(q.l2, b);
    return s;
}

} // namespace

TEST_CASE("rules are normalized with admissible barycentric points") {
    for (int d = 1; d <= 10; ++d) {
        auto rule = rule_for_degree(d);
        CHECK(rule.exact_degree >= d);
        double wsum = 0.0;
        for (const auto& q : rule.points) {
            CHECK(q.l0 >= -1e-15);
            CHECK(q.l1 >= -1e-15);
            CHECK(q.l2 >= -1e-15);
            CHECK(std::abs(q.l0 + q.l1 + q.l2 - 1.0) <= 1e-14);
            wsum += q.w;
        }
        CHECK(std::abs(wsum - 0.5) <= 1e-14);
    }
}

TEST_CASE("monomial exactness against the factorial formula") {
    for (int d = 1; d <= 10; ++d) {
        auto rule = rule_for_degree(d);
        for (int a = 0; a <= rule.exact_degree; ++a) {
            for (int b = 0; a + b <= rule.exact_degree; ++b) {
                double expect = monomial_integral(a, b);
                CHECK(std::abs(quad_monomial(rule, a, b) - expect) <= 1e-13);
            }
        }
    }
}

TEST_CASE("named low-degree rules") {
    auto r1 = rule_for_degree(1);
    REQUIRE(r1.points.size() == 1);
    CHECK(r1.points[0].l0 == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(r1.points[0].w == doctest::Approx(0.5).epsilon(1e-15));

    auto r2 = rule_for_degree(2);
    REQUIRE(r2.points.size() == 3);
    for (const auto& q : r2.points) CHECK(q.w == doctest::Approx(1.0 / 6).epsilon(1e-15));
    // int x^2 = 1/12 over the reference triangle
    CHECK(quad_monomial(r2, 2, 0) == doctest::Approx(1.0 / 12).epsilon(1e-14));
}

TEST_CASE("rule_for_degree rejects unsupported degrees") {
    CHECK_THROWS_AS(rule_for_degree(0), std::invalid_argument);
    CHECK_THROWS_AS(rule_for_degree(11), std::invalid_argument);
}

TEST_CASE("integrate_on_triangle basics") {
    Point2 a{0, 0}, b{1, 0}, c{0, 1};
    auto rule = rule_for_degree(5);
    double one = integrate_on_triangle([](double, double) { return 1.0; }, a, b, c, rule);
    CHECK(one == doctest::Approx(0.5).epsilon(1e-14));
    double x = integrate_on_triangle([](double x_, double) { return x_; }, a, b, c, rule);
    CHECK(x == doctest::Approx(1.0 / 6).epsilon(1e-13));
    double x2y3 =
        integrate_on_triangle([](double x_, double y_) { return x_ * x_ * y_ * y_ * y_; }, a, b, c,
                              rule);
    CHECK(x2y3 == doctest::Approx(1.0 / 420).epsilon(1e-12));
}

TEST_CASE("affine invariance of triangle integration") {
    // map A(x,y) = (2 + x + 0.5y, -1 + 0.25x + 2y); integrate a smooth f over
    // A(reference) and compare against the pulled-back integrand
    Point2 a{2.0, -1.0}, b{3.0, -0.75}, c{2.5, 1.0};
    auto rule = rule_for_degree(8);
    auto f = [](double x, double y) { return std::exp(0.3 * x) * std::cos(0.7 * y); };
    double direct = integrate_on_triangle(f, a, b, c, rule);
    double jac = 2.0 * signed_area(a, b, c);
    auto pulled = [&](double xi, double eta) {
        double x = a.x + (b.x - a.x) * xi + (c.x - a.x) * eta;
        double y = a.y + (b.y - a.y) * xi + (c.y - a.y) * eta;
        return f(x, y);
    };
    double reference =
        integrate_on_triangle(pulled, Point2{0, 0}, Point2{1, 0}, Point2{0, 1}, rule) * jac;
    CHECK(direct == doctest::Approx(reference).epsilon(1e-13));
}
