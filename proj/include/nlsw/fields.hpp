#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>

namespace nlsw {

using cplx = std::complex<double>;
using Grad2 = std::array<cplx, 2>;

/// Point-evaluable complex field on the domain, with an optional analytic
/// gradient (required by Ritz projection).
struct ScalarField {
    std::function<cplx(double, double)> value;
    std::function<Grad2(double, double)> gradient; // may be empty

    bool has_gradient() const { return static_cast<bool>(gradient); }
};

/// Time-parameterized field u(x, y, t).
struct TimeScalarField {
    std::function<cplx(double, double, double)> value;
    std::function<Grad2(double, double, double)> gradient; // may be empty

    ScalarField at(double t) const {
        ScalarField f;
        auto v = value;
        f.value = [v, t](double x, double y) { return v(x, y, t); };
        if (gradient) {
            auto g = gradient;
            f.gradient = [g, t](double x, double y) { return g(x, y, t); };
        }
        return f;
    }
};

inline ScalarField zero_field() {
    ScalarField f;
    f.value = [](double, double) { return cplx{}; };
    f.gradient = [](double, double) { return Grad2{}; };
    return f;
}

inline ScalarField field_add(const ScalarField& a, const ScalarField& b) {
    ScalarField f;
    f.value = [av = a.value, bv = b.value](double x, double y) { return av(x, y) + bv(x, y); };
    if (a.has_gradient() && b.has_gradient()) {
        f.gradient = [ag = a.gradient, bg = b.gradient](double x, double y) {
            Grad2 ga = ag(x, y), gb = bg(x, y);
            return Grad2{ga[0] + gb[0], ga[1] + gb[1]};
        };
    }
    return f;
}

inline ScalarField field_scale(cplx c, const ScalarField& a) {
    ScalarField f;
    f.value = [c, av = a.value](double x, double y) { return c * av(x, y); };
    if (a.has_gradient()) {
        f.gradient = [c, ag = a.gradient](double x, double y) {
            Grad2 g = ag(x, y);
            return Grad2{c * g[0], c * g[1]};
        };
    }
    return f;
}

/// Pointwise product w*u for real-valued w.
inline ScalarField field_mul(const ScalarField& w, const ScalarField& u) {
    ScalarField f;
    f.value = [wv = w.value, uv = u.value](double x, double y) { return wv(x, y) * uv(x, y); };
    if (w.has_gradient() && u.has_gradient()) {
        f.gradient = [wv = w.value, wg = w.gradient, uv = u.value,
                      ug = u.gradient](double x, double y) {
            cplx wval = wv(x, y), uval = uv(x, y);
            Grad2 gw = wg(x, y), gu = ug(x, y);
            return Grad2{wval * gu[0] + uval * gw[0], wval * gu[1] + uval * gw[1]};
        };
    }
    return f;
}

/// |u|^2 u with gradient 2|u|^2 grad(u) + u^2 conj(grad(u)).
inline ScalarField field_cubic(const ScalarField& u) {
    ScalarField f;
    f.value = [uv = u.value](double x, double y) {
        cplx v = uv(x, y);
        return std::norm(v) * v;
    };
    if (u.has_gradient()) {
        f.gradient = [uv = u.value, ug = u.gradient](double x, double y) {
            cplx v = uv(x, y);
            Grad2 g = ug(x, y);
            Grad2 out;
            for (int k = 0; k < 2; ++k)
                out[k] = 2.0 * std::norm(v) * g[k] + v * v * std::conj(g[k]);
            return out;
        };
    }
    return f;
}

} // namespace nlsw
