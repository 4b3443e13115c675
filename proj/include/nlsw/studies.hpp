#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "nlsw/report.hpp"
#include "nlsw/scheme.hpp"

namespace nlsw {

enum class StudyKind { Space, Time, Stability, Energy, Single };

struct StudyConfig {
    std::string problem = "example2"; // example1 | example2
    int degree = 1;
    StudyKind kind = StudyKind::Single;
    std::vector<int> levels;    // square: 1/h values; disk: refinement levels
    std::vector<double> taus;
    double T = 1.0;
    InitMode init = InitMode::Ritz;
    double tol = 1e-12;
    bool paper_scale = false;
    std::string out_dir = ".";
    int stride = 1;
    int threads = 1;
};

struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    double tau = 0.0;
    int dofs = 0;
    double l2_error = 0.0;
    std::optional<double> order;
    double wall_seconds = 0.0;
};

inline ProblemSpec make_problem(const std::string& id) {
    if (id == "example1") return example1();
    if (id == "example2") return example2();
    throw std::invalid_argument("unknown problem id: " + id);
}

inline TriangleMesh make_study_mesh(const ProblemSpec& problem, int level) {
    if (const auto* disk = std::get_if<Disk>(&problem.domain))
        return disk_mesh(disk->center, disk->radius, level);
    return unit_square_mesh(level);
}

/// Rounds a target time step to one that divides T exactly.
inline double snap_tau(double tau_target, double T) {
    int n = std::max(1, static_cast<int>(std::ceil(T / tau_target - 1e-12)));
    return T / n;
}

struct PointResult {
    double l2_error = 0.0;
    int dofs = 0;
    double h = 0.0;
    double wall_seconds = 0.0;
};

/// One (mesh level, tau) simulation ending with the L2 error at T.
inline PointResult run_point(const ProblemSpec& problem, int degree, int level, double tau,
                             double T, InitMode init, double tol) {
    auto t0 = std::chrono::steady_clock::now();
    TriangleMesh mesh = make_study_mesh(problem, level);
    FeSpace space = build_space(mesh, degree);
    SchemeConfig cfg;
    cfg.tau = tau;
    cfg.T = T;
    cfg.solver_tol = tol;
    cfg.init_mode = init;
    LeapFrogScheme scheme(problem, space, cfg);
    SchemeState final_state = scheme.run();
    PointResult res;
    res.l2_error = scheme.solution_error(final_state);
    res.dofs = space.dof_count();
    res.h = mesh.mesh_size();
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

namespace detail {

template <typename Task>
inline std::vector<PointResult> run_points(const std::vector<Task>& tasks, int threads) {
    std::vector<PointResult> results(tasks.size());
    if (threads <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
        return results;
    }
    size_t next = 0;
    while (next < tasks.size()) {
        size_t batch = std::min<size_t>(threads, tasks.size() - next);
        std::vector<std::future<PointResult>> futs;
        for (size_t k = 0; k < batch; ++k)
            futs.push_back(std::async(std::launch::async, tasks[next + k]));
        for (size_t k = 0; k < batch; ++k) results[next + k] = futs[k].get();
        next += batch;
    }
    return results;
}

} // namespace detail

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double order_avg = 0.0;
};

inline double mean_order(const std::vector<ConvergenceRow>& rows) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : rows)
        if (r.order) {
            sum += *r.order;
            ++count;
        }
    return count ? sum / count : 0.0;
}

/// Error-vs-h study. When taus is empty, tau is coupled as
/// tau = c * h^{(r+1)/2}; c starts at 1/4 and is halved (up to 3 times) until
/// a tau-halving probe on the coarsest level shows the temporal error part is
/// at most 10% of the total.
inline ConvergenceResult converge_space(const StudyConfig& cfg) {
    ProblemSpec problem = make_problem(cfg.problem);
    ConvergenceResult result;
    const double expo = (cfg.degree + 1) / 2.0;

    auto coarse_h = [&](int level) { return make_study_mesh(problem, level).mesh_size(); };

    std::vector<double> taus = cfg.taus;
    if (taus.empty()) {
        double c = 0.25;
        const int level0 = cfg.levels.front();
        double h0 = coarse_h(level0);
        for (int probe = 0; probe < 3; ++probe) {
            double tau = snap_tau(c * std::pow(h0, expo), cfg.T);
            double e1 = run_point(problem, cfg.degree, level0, tau, cfg.T, cfg.init, cfg.tol).l2_error;
            double e2 = run_point(problem, cfg.degree, level0, snap_tau(tau / 2, cfg.T), cfg.T,
                                  cfg.init, cfg.tol).l2_error;
            if (std::abs(e1 - e2) <= 0.1 * e2) break;
            c /= 2;
        }
        for (int level : cfg.levels)
            taus.push_back(snap_tau(c * std::pow(coarse_h(level), expo), cfg.T));
    } else if (taus.size() == 1) {
        taus.assign(cfg.levels.size(), taus[0]);
    }
    for (double& tau : taus) tau = snap_tau(tau, cfg.T);
    if (taus.size() != cfg.levels.size())
        throw std::invalid_argument("converge_space: need one tau per level (or none)");

    std::vector<std::function<PointResult()>> tasks;
    for (size_t i = 0; i < cfg.levels.size(); ++i) {
        int level = cfg.levels[i];
        double tau = taus[i];
        tasks.push_back([=, &problem] {
            return run_point(problem, cfg.degree, level, tau, cfg.T, cfg.init, cfg.tol);
        });
    }
    auto results = detail::run_points(tasks, cfg.threads);

    for (size_t i = 0; i < results.size(); ++i) {
        ConvergenceRow row;
        row.level = cfg.levels[i];
        row.h = results[i].h;
        row.tau = taus[i];
        row.dofs = results[i].dofs;
        row.l2_error = results[i].l2_error;
        row.wall_seconds = results[i].wall_seconds;
        if (i > 0)
            row.order = std::log2(results[i - 1].l2_error / results[i].l2_error) /
                        std::log2(results[i - 1].h / results[i].h);
        result.rows.push_back(row);
    }
    result.order_avg = mean_order(result.rows);
    return result;
}

/// Error-vs-tau study on a fixed fine mesh (levels.back()).
inline ConvergenceResult converge_time(const StudyConfig& cfg) {
    ProblemSpec problem = make_problem(cfg.problem);
    if (cfg.levels.empty() || cfg.taus.empty())
        throw std::invalid_argument("converge_time: need a mesh level and a tau list");
    const int level = cfg.levels.back();

    std::vector<std::function<PointResult()>> tasks;
    for (double tau_raw : cfg.taus) {
        double tau = snap_tau(tau_raw, cfg.T);
        tasks.push_back([=, &problem] {
            return run_point(problem, cfg.degree, level, tau, cfg.T, cfg.init, cfg.tol);
        });
    }
    auto results = detail::run_points(tasks, cfg.threads);

    ConvergenceResult result;
    for (size_t i = 0; i < results.size(); ++i) {
        ConvergenceRow row;
        row.level = level;
        row.h = results[i].h;
        row.tau = snap_tau(cfg.taus[i], cfg.T);
        row.dofs = results[i].dofs;
        row.l2_error = results[i].l2_error;
        row.wall_seconds = results[i].wall_seconds;
        if (i > 0)
            row.order = std::log2(results[i - 1].l2_error / results[i].l2_error) /
                        std::log2(row.tau > 0 ? snap_tau(cfg.taus[i - 1], cfg.T) / row.tau : 2.0);
        result.rows.push_back(row);
    }
    result.order_avg = mean_order(result.rows);
    return result;
}

struct StabilitySeries {
    double tau = 0.0;
    std::vector<ConvergenceRow> rows;
    bool plateau = false;     // last two errors within 5%
    double plateau_value = 0.0;
};

/// Fixed-tau error-vs-h series; unconditional stability shows as a finite
/// error plateau instead of blow-up.
inline std::vector<StabilitySeries> stability_study(const StudyConfig& cfg) {
    ProblemSpec problem = make_problem(cfg.problem);
    std::vector<StabilitySeries> out;
    for (double tau_raw : cfg.taus) {
        StabilitySeries series;
        series.tau = snap_tau(tau_raw, cfg.T);
        std::vector<std::function<PointResult()>> tasks;
        for (int level : cfg.levels) {
            tasks.push_back([=, &problem] {
                return run_point(problem, cfg.degree, level, series.tau, cfg.T, cfg.init, cfg.tol);
            });
        }
        auto results = detail::run_points(tasks, cfg.threads);
        for (size_t i = 0; i < results.size(); ++i) {
            ConvergenceRow row;
            row.level = cfg.levels[i];
            row.h = results[i].h;
            row.tau = series.tau;
            row.dofs = results[i].dofs;
            row.l2_error = results[i].l2_error;
            row.wall_seconds = results[i].wall_seconds;
            series.rows.push_back(row);
        }
        size_t n = series.rows.size();
        if (n >= 2) {
            double a = series.rows[n - 2].l2_error, b = series.rows[n - 1].l2_error;
            series.plateau = std::abs(a - b) < 0.05 * std::max(a, b);
            series.plateau_value = b;
        }
        out.push_back(std::move(series));
    }
    return out;
}

struct EnergyRow {
    int n = 0;
    double t = 0.0;
    EnergyBreakdown energy;
    double relative_drift = 0.0;
};

struct EnergyTrace {
    std::vector<EnergyRow> rows;
    double max_relative_drift = 0.0;
};

/// Discrete-energy trace; only meaningful (and only allowed) for source-free
/// problems with homogeneous boundary data.
inline EnergyTrace energy_study(const StudyConfig& cfg) {
    ProblemSpec problem = make_problem(cfg.problem);
    if (!problem.zero_source || !problem.homogeneous_boundary)
        throw std::invalid_argument(
            "energy study requires a source-free problem with homogeneous boundary "
            "(the hypotheses of the conservation identity); use example2");
    if (cfg.taus.size() != 1 || cfg.levels.size() != 1)
        throw std::invalid_argument("energy study: give exactly one level and one tau");

    TriangleMesh mesh = make_study_mesh(problem, cfg.levels[0]);
    FeSpace space = build_space(mesh, cfg.degree);
    SchemeConfig scfg;
    scfg.tau = snap_tau(cfg.taus[0], cfg.T);
    scfg.T = cfg.T;
    scfg.solver_tol = cfg.tol;
    scfg.init_mode = cfg.init;
    LeapFrogScheme scheme(problem, space, scfg);

    EnergyTrace trace;
    double e0 = 0.0;
    const int total_steps = scfg.step_count();
    scheme.run([&](const SchemeState& state, const StepReport*) {
        bool record = (state.n - 1) % cfg.stride == 0 || state.n == total_steps;
        EnergyBreakdown e = scheme.discrete_energy(state);
        if (state.n == 1) e0 = e.total;
        double drift = std::abs(e.total - e0) / std::max(1.0, std::abs(e0));
        trace.max_relative_drift = std::max(trace.max_relative_drift, drift);
        if (record) trace.rows.push_back({state.n, state.t, e, drift});
    });
    return trace;
}

// ---- CSV / SVG emission ----

inline CsvTable convergence_csv(const ConvergenceResult& result) {
    CsvTable t;
    t.header = {"level", "h", "tau", "dofs", "l2_error", "order", "wall_time_s"};
    for (const auto& r : result.rows)
        t.rows.push_back({std::to_string(r.level), format_sci(r.h), format_sci(r.tau),
                          std::to_string(r.dofs), format_sci(r.l2_error),
                          r.order ? format_sci(*r.order) : "", format_sci(r.wall_seconds)});
    return t;
}

inline CsvTable stability_csv(const std::vector<StabilitySeries>& series) {
    CsvTable t;
    t.header = {"tau", "level", "h", "dofs", "l2_error", "plateau"};
    for (const auto& s : series)
        for (const auto& r : s.rows)
            t.rows.push_back({format_sci(s.tau), std::to_string(r.level), format_sci(r.h),
                              std::to_string(r.dofs), format_sci(r.l2_error),
                              s.plateau ? "1" : "0"});
    return t;
}

inline CsvTable energy_csv(const EnergyTrace& trace) {
    CsvTable t;
    t.header = {"n", "t", "kinetic", "gradient", "quartic", "potential", "total",
                "relative_drift"};
    for (const auto& r : trace.rows)
        t.rows.push_back({std::to_string(r.n), format_sci(r.t), format_sci(r.energy.kinetic),
                          format_sci(r.energy.gradient), format_sci(r.energy.quartic),
                          format_sci(r.energy.potential), format_sci(r.energy.total),
                          format_sci(r.relative_drift)});
    return t;
}

inline void write_convergence_svg(const std::string& path, const ConvergenceResult& result,
                                  bool versus_tau, const std::string& title) {
    PlotSeries s;
    s.name = "L2 error";
    for (const auto& r : result.rows)
        s.points.push_back({versus_tau ? r.tau : r.h, r.l2_error});
    write_line_chart_svg(path, title, versus_tau ? "tau" : "h", "L2 error", {s}, true, true);
}

inline void write_stability_svg(const std::string& path,
                                const std::vector<StabilitySeries>& series,
                                const std::string& title) {
    std::vector<PlotSeries> plots;
    for (const auto& s : series) {
        PlotSeries ps;
        char buf[40];
        std::snprintf(buf, sizeof(buf), "tau=%.4g", s.tau);
        ps.name = buf;
        for (const auto& r : s.rows) ps.points.push_back({1.0 / r.h, r.l2_error});
        plots.push_back(std::move(ps));
    }
    write_line_chart_svg(path, title, "1/h", "L2 error", plots, true, true);
}

inline void write_energy_svg(const std::string& path, const EnergyTrace& trace,
                             const std::string& title) {
    PlotSeries s;
    s.name = "E";
    for (const auto& r : trace.rows) s.points.push_back({r.t, r.energy.total});
    write_line_chart_svg(path, title, "t", "discrete energy", {s}, false, false);
}

} // namespace nlsw
