// Acceptance gate: end-to-end checks with pinned tolerances, one PASS/FAIL
// line per criterion. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "nlsw/studies.hpp"

using namespace nlsw;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

// --- 1: long-time energy conservation on the manufactured square problem ---
void criterion1() {
    StudyConfig cfg;
    cfg.problem = "example2";
    cfg.degree = 1;
    cfg.levels = {16};
    cfg.taus = {0.01};
    cfg.T = 10.0;
    cfg.stride = 100;
    EnergyTrace trace = energy_study(cfg);
    report(1, trace.max_relative_drift <= 1e-10,
           fmt("energy drift over T=10 is %.3e (threshold 1e-10)", trace.max_relative_drift));
}

// --- 2: energy conservation for generic (random) initial data ---
void criterion2() {
    ProblemSpec p = example2();
    auto mesh = unit_square_mesh(16);
    auto space = build_space(mesh, 1);
    SchemeConfig cfg;
    cfg.tau = 0.01;
    cfg.T = 5.0; // 500 steps
    LeapFrogScheme scheme(p, space, cfg);

    std::mt19937 rng(20260823);
    std::uniform_real_distribution<double> val(-0.5, 0.5);
    SchemeState state;
    state.n = 1;
    state.t = cfg.tau;
    state.U_prev.assign(space.dof_count(), cplx{});
    state.U_curr.assign(space.dof_count(), cplx{});
    for (int d : space.free_dofs) {
        state.U_prev[d] = {val(rng), val(rng)};
        state.U_curr[d] = {val(rng), val(rng)};
    }

    double e0 = scheme.discrete_energy(state).total;
    double drift = 0.0;
    for (int n = 0; n < 500; ++n) {
        scheme.step(state);
        double e = scheme.discrete_energy(state).total;
        drift = std::max(drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
    }
    report(2, drift <= 1e-10,
           fmt("energy drift with random data over 500 steps is %.3e (threshold 1e-10)", drift));
}

// --- 3: spatial convergence on the square, P1 and P2 ---
void criterion3() {
    for (int degree : {1, 2}) {
        StudyConfig cfg;
        cfg.problem = "example2";
        cfg.degree = degree;
        cfg.levels = {8, 16, 32};
        cfg.T = 1.0;
        const double expo = (degree + 1) / 2.0;
        for (int level : cfg.levels) {
            double h = std::sqrt(2.0) / level;
            cfg.taus.push_back(snap_tau(0.25 * std::pow(h, expo), cfg.T));
        }
        ConvergenceResult res = converge_space(cfg);
        const double lo = degree == 1 ? 1.85 : 2.8;
        const double hi = degree == 1 ? 2.15 : 3.2;
        bool pass = res.order_avg >= lo && res.order_avg <= hi;
        std::string detail = fmt("square P%.0f spatial order %.3f (want [%.2f", double(degree),
                                 res.order_avg, lo) + fmt(", %.2f])", hi);
        if (degree == 1) {
            // reference error magnitude at 1/h = 16
            double e16 = res.rows[1].l2_error;
            bool mag = e16 <= 2.0 * 1.136e-2 && e16 >= 0.5 * 1.136e-2;
            pass = pass && mag;
            detail += fmt("; error at 1/h=16 is %.4e (want within 2x of 1.136e-2)", e16);
        }
        report(3, pass, detail);
    }
}

// --- 4: temporal convergence on a fine P2 mesh ---
void criterion4() {
    StudyConfig cfg;
    cfg.problem = "example2";
    cfg.degree = 2;
    cfg.levels = {64};
    cfg.taus = {1.0 / 8, 1.0 / 16, 1.0 / 32};
    cfg.T = 1.0;
    ConvergenceResult res = converge_time(cfg);
    bool pass = res.order_avg >= 1.8 && res.order_avg <= 2.2;
    report(4, pass, fmt("square P2 temporal order %.3f (want [1.8, 2.2])", res.order_avg));
}

// --- 5: spatial convergence on the disk with nonhomogeneous boundary data ---
void criterion5() {
    {
        StudyConfig cfg;
        cfg.problem = "example1";
        cfg.degree = 1;
        cfg.levels = {3, 4, 5};
        cfg.T = 1.0;
        // the exact solution oscillates at frequency 8, so the temporal error
        // constant is large; tau = h/16 keeps it subdominant on these levels
        for (int level : cfg.levels) {
            double h = make_study_mesh(example1(), level).mesh_size();
            cfg.taus.push_back(snap_tau(h / 16.0, cfg.T));
        }
        ConvergenceResult res = converge_space(cfg);
        bool pass = res.order_avg >= 1.8 && res.order_avg <= 2.2;
        report(5, pass, fmt("disk P1 spatial order %.3f (want [1.8, 2.2])", res.order_avg));
    }
    {
        // P2 on the polygonal disk: the boundary approximation limits the
        // rate, so require at least second order
        StudyConfig cfg;
        cfg.problem = "example1";
        cfg.degree = 2;
        cfg.levels = {2, 3, 4};
        cfg.T = 1.0;
        for (int level : cfg.levels) {
            double h = make_study_mesh(example1(), level).mesh_size();
            cfg.taus.push_back(snap_tau(std::pow(h, 1.5) / 32.0, cfg.T));
        }
        ConvergenceResult res = converge_space(cfg);
        bool pass = res.order_avg >= 2.0;
        report(5, pass, fmt("disk P2 spatial order %.3f (want >= 2.0)", res.order_avg));
    }
}

// --- 6: unconditional stability - fixed tau gives an error plateau in h ---
void criterion6() {
    StudyConfig cfg;
    cfg.problem = "example2";
    cfg.degree = 1;
    cfg.levels = {8, 16, 32, 64};
    cfg.taus = {0.1, 0.01};
    cfg.T = 1.0;
    auto series = stability_study(cfg);
    // the coarse-tau error must flatten out (no blow-up as h shrinks) and the
    // fine-tau error must end strictly below it (the plateau is set by tau)
    bool plat_coarse = series[0].plateau;
    bool ordered = series[1].plateau_value < series[0].plateau_value;
    report(6, plat_coarse && ordered,
           fmt("plateau(tau=0.1)=%.3e flat within 5%%; error(tau=0.01)=%.3e ends below it",
               series[0].plateau_value, series[1].plateau_value));
}

// --- 7: the analytic oracles themselves run fast and agree ---
void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;

    // quadrature: every rule integrates monomials to the factorial formula
    for (int d = 1; d <= 10 && ok; ++d) {
        auto rule = rule_for_degree(d);
        for (int a = 0; a <= rule.exact_degree && ok; ++a) {
            for (int b = 0; a + b <= rule.exact_degree && ok; ++b) {
                double num = 1.0, den = 1.0;
                for (int k = 2; k <= a; ++k) num *= k;
                for (int k = 2; k <= b; ++k) num *= k;
                for (int k = 2; k <= a + b + 2; ++k) den *= k;
                double s = 0.0;
                for (const auto& q : rule.points)
                    s += q.w * std::pow(q.l1, a) * std::pow(q.l2, b);
                if (std::abs(s - num / den) > 1e-13) ok = false;
            }
        }
    }

    // manufactured sources satisfy the equation by finite differences
    std::vector<double> times = {0.25, 1.0, 2.0};
    auto r1 = residual_check(example1(), 30, times);
    auto r2 = residual_check(example2(), 30, times);
    ok = ok && r1.pass && r2.pass;

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(7, ok && wall < 30.0,
           fmt("oracle suite agrees (max residuals %.2e, %.2e) in %.1f s (< 30 s)",
               r1.max_residual, r2.max_residual, wall));
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    std::printf("%s (%d failed)\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                failures);
    return failures;
}
