#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "nlsw/fields.hpp"
#include "nlsw/mesh.hpp"

namespace nlsw {

/// Manufactured problem: u_tt - lap(u) + i u_t + |u|^2 u + w u = g on the
/// given domain, with Dirichlet data and initial conditions taken from the
/// exact solution.
struct ProblemSpec {
    DomainShape domain;
    ScalarField w;            // real-valued potential
    ScalarField u0;           // u(.,0)
    ScalarField u1;           // u_t(.,0)
    ScalarField laplacian_u0; // lap(u)(.,0)
    TimeScalarField exact;
    std::optional<TimeScalarField> source;   // g; absent means zero
    TimeScalarField boundary;                // exact restricted to the boundary
    bool homogeneous_boundary = false;
    bool zero_source = false;
};

/// Disk problem with exact solution 20 e^{i8t}(1+8t^2) x^2(1-x) y^2(1-y) and
/// potential w = -x^2 y^2; the source g is derived by substituting the exact
/// solution into the PDE.
inline ProblemSpec example1() {
    const cplx I{0.0, 1.0};
    auto X = [](double x) { return x * x * (1.0 - x); };
    auto Xp = [](double x) { return 2.0 * x - 3.0 * x * x; };
    auto Xpp = [](double x) { return 2.0 - 6.0 * x; };
    constexpr double Xppp = -6.0;
    auto A = [I](double t) { return 20.0 * std::exp(I * (8.0 * t)) * (1.0 + 8.0 * t * t); };
    auto Ap = [I](double t) {
        return 20.0 * std::exp(I * (8.0 * t)) * (16.0 * t + I * (8.0 * (1.0 + 8.0 * t * t)));
    };
    auto App = [I](double t) {
        return 20.0 * std::exp(I * (8.0 * t)) *
               (16.0 - 64.0 * (1.0 + 8.0 * t * t) + I * (256.0 * t));
    };

    ProblemSpec p;
    p.domain = Disk{{0.5, 0.5}, 0.5};

    p.w.value = [](double x, double y) { return cplx{-x * x * y * y, 0.0}; };
    p.w.gradient = [](double x, double y) {
        return Grad2{cplx{-2.0 * x * y * y, 0.0}, cplx{-2.0 * x * x * y, 0.0}};
    };

    p.exact.value = [A, X](double x, double y, double t) { return A(t) * X(x) * X(y); };
    p.exact.gradient = [A, X, Xp](double x, double y, double t) {
        return Grad2{A(t) * Xp(x) * X(y), A(t) * X(x) * Xp(y)};
    };

    p.u0.value = [X](double x, double y) { return cplx{20.0 * X(x) * X(y), 0.0}; };
    p.u0.gradient = [X, Xp](double x, double y) {
        return Grad2{cplx{20.0 * Xp(x) * X(y), 0.0}, cplx{20.0 * X(x) * Xp(y), 0.0}};
    };
    p.u1.value = [I, X](double x, double y) { return 160.0 * I * X(x) * X(y); };
    p.u1.gradient = [I, X, Xp](double x, double y) {
        return Grad2{160.0 * I * Xp(x) * X(y), 160.0 * I * X(x) * Xp(y)};
    };
    p.laplacian_u0.value = [X, Xpp](double x, double y) {
        return cplx{20.0 * (Xpp(x) * X(y) + X(x) * Xpp(y)), 0.0};
    };
    p.laplacian_u0.gradient = [X, Xp, Xpp](double x, double y) {
        return Grad2{cplx{20.0 * (Xppp * X(y) + Xp(x) * Xpp(y)), 0.0},
                     cplx{20.0 * (Xpp(x) * Xp(y) + X(x) * Xppp), 0.0}};
    };

    TimeScalarField g;
    g.value = [=](double x, double y, double t) {
        const double S = X(x) * X(y);
        const cplx a = A(t);
        const cplx u = a * S;
        const cplx u_tt = App(t) * S;
        const cplx lap_u = a * (Xpp(x) * X(y) + X(x) * Xpp(y));
        const cplx u_t = Ap(t) * S;
        const double w = -x * x * y * y;
        return u_tt - lap_u + I * u_t + std::norm(u) * u + w * u;
    };
    p.source = g;
    p.boundary = p.exact;
    p.homogeneous_boundary = false;
    p.zero_source = false;
    return p;
}

/// Square problem with exact solution sin(pi x) sin(pi y) e^{-i sqrt(2) pi t};
/// the potential makes the equation source-free.
inline ProblemSpec example2() {
    const cplx I{0.0, 1.0};
    const double pi = M_PI;
    const double s2pi = std::sqrt(2.0) * pi;
    auto S = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };

    ProblemSpec p;
    p.domain = UnitSquare{};

    p.w.value = [S, s2pi](double x, double y) {
        double s = S(x, y);
        return cplx{-(s2pi + s * s), 0.0};
    };
    p.w.gradient = [pi](double x, double y) {
        double sx = std::sin(pi * x), sy = std::sin(pi * y);
        return Grad2{cplx{-pi * std::sin(2.0 * pi * x) * sy * sy, 0.0},
                     cplx{-pi * sx * sx * std::sin(2.0 * pi * y), 0.0}};
    };

    p.exact.value = [I, S, s2pi](double x, double y, double t) {
        return S(x, y) * std::exp(-I * (s2pi * t));
    };
    p.exact.gradient = [I, pi, s2pi](double x, double y, double t) {
        cplx ph = std::exp(-I * (s2pi * t));
        return Grad2{pi * std::cos(pi * x) * std::sin(pi * y) * ph,
                     pi * std::sin(pi * x) * std::cos(pi * y) * ph};
    };

    p.u0 = p.exact.at(0.0);
    p.u1 = field_scale(-I * s2pi, p.u0);
    p.laplacian_u0 = field_scale(-2.0 * pi * pi, p.u0);

    p.boundary = p.exact;
    p.homogeneous_boundary = true;
    p.zero_source = true;
    return p;
}

struct ResidualReport {
    bool pass = false;
    double max_residual = 0.0;
};

namespace detail {

inline bool point_clear_of_boundary(const DomainShape& shape, double x, double y, double margin) {
    if (const auto* disk = std::get_if<Disk>(&shape)) {
        double r = std::hypot(x - disk->center.x, y - disk->center.y);
        return r + margin < disk->radius;
    }
    return x > margin && x < 1.0 - margin && y > margin && y < 1.0 - margin;
}

// deterministic quasi-random samples (Halton base 2/3)
inline double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    for (int i = index; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

} // namespace detail

/// Finite-difference self-check of the manufactured source: evaluates
/// u_tt - lap(u) + i u_t + |u|^2 u + w u - g at scattered interior points via
/// second-order central differences and reports the max modulus.
inline ResidualReport residual_check(const ProblemSpec& p, int sample_count,
                                     const std::vector<double>& times, double tolerance = 1e-4,
                                     double fd_step = 1e-4) {
    const cplx I{0.0, 1.0};
    const double s = fd_step;
    ResidualReport report;

    auto u = [&](double x, double y, double t) { return p.exact.value(x, y, t); };

    int found = 0, index = 1;
    while (found < sample_count && index < 100 * sample_count + 1000) {
        double x = detail::halton(index, 2);
        double y = detail::halton(index, 3);
        ++index;
        if (const auto* disk = std::get_if<Disk>(&p.domain)) {
            x = disk->center.x + (2.0 * x - 1.0) * disk->radius;
            y = disk->center.y + (2.0 * y - 1.0) * disk->radius;
        }
        if (!detail::point_clear_of_boundary(p.domain, x, y, 2.0 * s)) continue;
        ++found;

        for (double t : times) {
            cplx u_tt = (u(x, y, t + s) - 2.0 * u(x, y, t) + u(x, y, t - s)) / (s * s);
            cplx u_t = (u(x, y, t + s) - u(x, y, t - s)) / (2.0 * s);
            cplx lap = (u(x + s, y, t) + u(x - s, y, t) + u(x, y + s, t) + u(x, y - s, t) -
                        4.0 * u(x, y, t)) /
                       (s * s);
            cplx uc = u(x, y, t);
            cplx res = u_tt - lap + I * u_t + std::norm(uc) * uc + p.w.value(x, y) * uc;
            if (p.source) res -= p.source->value(x, y, t);
            report.max_residual = std::max(report.max_residual, std::abs(res));
        }
    }
    report.pass = report.max_residual <= tolerance;
    return report;
}

} // namespace nlsw
