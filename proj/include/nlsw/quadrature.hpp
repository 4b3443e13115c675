#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nlsw/mesh.hpp"

namespace nlsw {

struct QuadPoint {
    double l0, l1, l2; // barycentric coordinates
    double w;          // weight in reference-triangle measure (sum = 1/2)
};

struct TriangleQuadrature {
    std::vector<QuadPoint> points;
    int exact_degree = 0;
};

namespace detail {

inline TriangleQuadrature centroid_rule() {
    return {{{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5}}, 1};
}

inline TriangleQuadrature midpoint_rule() {
    return {{{0.5, 0.5, 0.0, 1.0 / 6},
             {0.0, 0.5, 0.5, 1.0 / 6},
             {0.5, 0.0, 0.5, 1.0 / 6}},
            2};
}

// Classic 7-point symmetric rule, exact to degree 5. Orbit parameters are
// closed-form in sqrt(15).
inline TriangleQuadrature seven_point_rule() {
    const double s15 = std::sqrt(15.0);
    const double a = (6.0 + s15) / 21.0, wa = 0.5 * (155.0 + s15) / 1200.0;
    const double b = (6.0 - s15) / 21.0, wb = 0.5 * (155.0 - s15) / 1200.0;
    TriangleQuadrature q;
    q.exact_degree = 5;
    q.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5 * 9.0 / 40.0});
    q.points.push_back({1 - 2 * a, a, a, wa});
    q.points.push_back({a, 1 - 2 * a, a, wa});
    q.points.push_back({a, a, 1 - 2 * a, wa});
    q.points.push_back({1 - 2 * b, b, b, wb});
    q.points.push_back({b, 1 - 2 * b, b, wb});
    q.points.push_back({b, b, 1 - 2 * b, wb});
    return q;
}

// Conical-product Gauss rules (Gauss-Jacobi x Gauss-Legendre, collapsed onto
// the reference triangle). All points interior, all weights positive.
inline TriangleQuadrature conical_deg7_rule() {
    static const double tab[16][4] = {
        {0.87742880933046774, 0.057104196114517725, 0.065466994555014452, 0.0235683681933824},
        {0.6317312516411252, 0.057104196114517725, 0.31116455224435702, 0.044185088522361859},
        {0.31116455224435702, 0.057104196114517725, 0.6317312516411252, 0.044185088522361859},
        {0.065466994555014479, 0.057104196114517725, 0.87742880933046774, 0.0235683681933824},
        {0.67294686315050645, 0.2768430136381238, 0.050210123211369778, 0.035388067898085893},
        {0.48450832663043331, 0.2768430136381238, 0.23864865973144292, 0.066344216107049658},
        {0.23864865973144295, 0.2768430136381238, 0.48450832663043325, 0.066344216107049658},
        {0.050210123211369861, 0.2768430136381238, 0.67294686315050634, 0.035388067898085893},
        {0.38749748340669415, 0.58359043236891683, 0.028912084224389012, 0.022584049282369907},
        {0.2789904634965088, 0.58359043236891683, 0.13741910413457437, 0.04233972452174626},
        {0.13741910413457437, 0.58359043236891683, 0.2789904634965088, 0.04233972452174626},
        {0.028912084224389012, 0.58359043236891683, 0.38749748340669415, 0.022584049282369907},
        {0.1300560792168344, 0.86024013565621948, 0.0097037851269461094, 0.0054232259105252536},
        {0.093637784437328481, 0.86024013565621948, 0.046122079906452035, 0.010167259564478788},
        {0.046122079906452035, 0.86024013565621948, 0.093637784437328481, 0.010167259564478788},
        {0.0097037851269461128, 0.86024013565621948, 0.1300560792168344, 0.0054232259105252536},
    };
    TriangleQuadrature q;
    q.exact_degree = 7;
    for (const auto& r : tab) q.points.push_back({r[0], r[1], r[2], r[3]});
    return q;
}

inline TriangleQuadrature conical_deg11_rule() {
    static const double tab[36][4] = {
        {0.9379082062257551, 0.029316427159784941, 0.032775366614459879, 0.0061942653526588613},
        {0.80625433124538759, 0.029316427159784941, 0.16442924159482744, 0.013043394330082867},
        {0.60115364846783836, 0.029316427159784941, 0.36952992437237664, 0.016917505680012716},
        {0.36952992437237664, 0.029316427159784941, 0.60115364846783836, 0.016917505680012716},
        {0.16442924159482741, 0.029316427159784941, 0.80625433124538759, 0.013043394330082867},
        {0.0327753666144599, 0.029316427159784941, 0.9379082062257551, 0.0061942653526588613},
        {0.82315606731895652, 0.1480785996684843, 0.028765333012559118, 0.011610874766997507},
        {0.70760991338109902, 0.1480785996684843, 0.14431148695041665, 0.024449262258057821},
        {0.52760309574273967, 0.1480785996684843, 0.32431830458877597, 0.031711111590704007},
        {0.32431830458877597, 0.1480785996684843, 0.52760309574273967, 0.031711111590704007},
        {0.14431148695041662, 0.1480785996684843, 0.70760991338109902, 0.024449262258057821},
        {0.028765333012559124, 0.1480785996684843, 0.82315606731895652, 0.011610874766997507},
        {0.64062843674081504, 0.3369846902811543, 0.022386872978030627, 0.012060606404265088},
        {0.55070362793789196, 0.3369846902811543, 0.1123116817809537, 0.025396271589047635},
        {0.41061174164232772, 0.3369846902811543, 0.25240356807651798, 0.032939398900786683},
        {0.25240356807651798, 0.3369846902811543, 0.41061174164232772, 0.032939398900786683},
        {0.11231168178095374, 0.3369846902811543, 0.55070362793789196, 0.025396271589047635},
        {0.022386872978030659, 0.3369846902811543, 0.64062843674081504, 0.012060606404265088},
        {0.42642691786177866, 0.55867151877155019, 0.014901563366671153, 0.0084515357969431083},
        {0.36656950776580072, 0.55867151877155019, 0.074758973462649092, 0.017796575997026262},
        {0.27331896210725798, 0.55867151877155019, 0.16800951912119183, 0.023082463651358229},
        {0.16800951912119183, 0.55867151877155019, 0.27331896210725798, 0.023082463651358229},
        {0.074758973462649092, 0.55867151877155019, 0.36656950776580072, 0.017796575997026262},
        {0.014901563366671144, 0.55867151877155019, 0.42642691786177866, 0.0084515357969431083},
        {0.22297426326865907, 0.7692338620300545, 0.007791874701286429, 0.0037652982126916679},
        {0.19167543723712124, 0.7692338620300545, 0.039090700732824245, 0.0079286673337964804},
        {0.1429156829939483, 0.7692338620300545, 0.08785045497599718, 0.010283617228766331},
        {0.087850454975997194, 0.7692338620300545, 0.1429156829939483, 0.010283617228766331},
        {0.039090700732824252, 0.7692338620300545, 0.19167543723712124, 0.0079286673337964804},
        {0.007791874701286422, 0.7692338620300545, 0.22297426326865907, 0.0037652982126916679},
        {0.070587631527588721, 0.92694567131974104, 0.0024666971526702448, 0.00074854256123631734},
        {0.060679268262818914, 0.92694567131974104, 0.012375060417440052, 0.0015762217540235878},
        {0.045243246564898351, 0.92694567131974104, 0.027811082115360607, 0.0020443865915448591},
        {0.027811082115360604, 0.92694567131974104, 0.045243246564898358, 0.0020443865915448591},
        {0.012375060417440055, 0.92694567131974104, 0.060679268262818907, 0.0015762217540235878},
        {0.0024666971526702414, 0.92694567131974104, 0.070587631527588721, 0.00074854256123631734},
    };
    TriangleQuadrature q;
    q.exact_degree = 11;
    for (const auto& r : tab) q.points.push_back({r[0], r[1], r[2], r[3]});
    return q;
}

} // namespace detail

/// Returns a fixed rule with exact_degree >= d, for d in 1..10.
inline TriangleQuadrature rule_for_degree(int d) {
    if (d < 1 || d > 10) throw std::invalid_argument("rule_for_degree: degree must be in 1..10");
    if (d <= 1) return detail::centroid_rule();
    if (d == 2) return detail::midpoint_rule();
    if (d <= 5) return detail::seven_point_rule();
    if (d <= 7) return detail::conical_deg7_rule();
    return detail::conical_deg11_rule();
}

/// Quadrature of f over an affine triangle; f is evaluated at physical points.
template <typename F>
auto integrate_on_triangle(F&& f, const Point2& a, const Point2& b, const Point2& c,
                           const TriangleQuadrature& rule) {
    const double jac = 2.0 * std::abs(signed_area(a, b, c));
    decltype(f(0.0, 0.0)) sum{};
    for (const auto& q : rule.points) {
        double x = q.l0 * a.x + q.l1 * b.x + q.l2 * c.x;
        double y = q.l0 * a.y + q.l1 * b.y + q.l2 * c.y;
        sum += q.w * f(x, y);
    }
    return sum * jac;
}

template <typename F>
auto integrate_on_triangle(F&& f, const TriangleMesh& mesh, int t, const TriangleQuadrature& rule) {
    const auto& tr = mesh.triangles[t];
    return integrate_on_triangle(std::forward<F>(f), mesh.vertices[tr.v[0]],
                                 mesh.vertices[tr.v[1]], mesh.vertices[tr.v[2]], rule);
}

} // namespace nlsw
