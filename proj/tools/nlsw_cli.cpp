// Command-line front end: mesh generation, single runs, convergence studies,
// stability probes, and long-time energy traces with CSV/SVG output.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 solver failure,
// 3 threshold miss in --check mode.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "nlsw/mesh_io.hpp"
#include "nlsw/studies.hpp"

namespace fs = std::filesystem;
using namespace nlsw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitCheckMiss = 3;

// Flat "key = value" configuration file; command-line flags win.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto last = s.find_last_not_of(" \t");
            s.erase(last == std::string::npos ? 0 : last + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

struct CommonOptions {
    StudyConfig study;
    std::string init_name = "ritz";
    std::string config_path;
    bool check = false;
    double order_min = 0.0, order_max = 1e9;
    double drift_max = 1e-10;

    void apply_config() {
        if (config_path.empty()) return;
        auto kv = load_config(config_path);
        if (kv.count("problem")) study.problem = kv["problem"];
        if (kv.count("degree")) study.degree = std::stoi(kv["degree"]);
        if (kv.count("levels")) study.levels = parse_int_list(kv["levels"]);
        if (kv.count("taus")) study.taus = parse_double_list(kv["taus"]);
        if (kv.count("T")) study.T = std::stod(kv["T"]);
        if (kv.count("init")) init_name = kv["init"];
        if (kv.count("tol")) study.tol = std::stod(kv["tol"]);
        if (kv.count("paper_scale")) study.paper_scale = kv["paper_scale"] == "true" || kv["paper_scale"] == "1";
        if (kv.count("out_dir")) study.out_dir = kv["out_dir"];
        if (kv.count("stride")) study.stride = std::stoi(kv["stride"]);
        if (kv.count("threads")) study.threads = std::stoi(kv["threads"]);
    }

    void finalize() {
        if (init_name == "ritz") study.init = InitMode::Ritz;
        else if (init_name == "interpolation") study.init = InitMode::Interpolation;
        else throw std::invalid_argument("init must be 'ritz' or 'interpolation'");
        fs::create_directories(study.out_dir);
    }
};

void add_common_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "flat key = value config file");
    cmd->add_option("--problem", opt.study.problem, "example1 | example2");
    cmd->add_option("--degree", opt.study.degree, "element degree r (1 or 2)");
    cmd->add_option("--levels", opt.study.levels, "mesh levels (square: 1/h, disk: refinement)")
        ->delimiter(',');
    cmd->add_option("--taus", opt.study.taus, "time step list")->delimiter(',');
    cmd->add_option("--T", opt.study.T, "final time");
    cmd->add_option("--init", opt.init_name, "ritz | interpolation");
    cmd->add_option("--tol", opt.study.tol, "linear solver tolerance");
    cmd->add_flag("--paper-scale", opt.study.paper_scale, "use the costly full-scale reference settings");
    cmd->add_option("--out-dir", opt.study.out_dir, "output directory");
    cmd->add_option("--stride", opt.study.stride, "recording stride");
    cmd->add_option("--threads", opt.study.threads, "concurrent study points");
}

void print_convergence(const ConvergenceResult& result) {
    std::cout << "level,h,tau,dofs,l2_error,order\n";
    for (const auto& r : result.rows) {
        std::cout << r.level << ',' << format_sci(r.h) << ',' << format_sci(r.tau) << ','
                  << r.dofs << ',' << format_sci(r.l2_error) << ','
                  << (r.order ? format_sci(*r.order) : std::string("")) << '\n';
    }
    std::cout << "order_avg," << format_sci(result.order_avg) << '\n';
}

int cmd_mesh(const std::string& action, const std::string& shape, int n, int level,
             const std::string& path) {
    if (action == "gen") {
        TriangleMesh mesh = shape == "disk" ? disk_mesh({0.5, 0.5}, 0.5, level)
                                            : unit_square_mesh(n);
        std::ofstream out(path);
        if (!out) throw std::invalid_argument("cannot open output file: " + path);
        write_mesh(mesh, out);
        std::cout << "wrote " << path << ": " << mesh.vertex_count() << " vertices, "
                  << mesh.triangle_count() << " triangles, h=" << mesh.mesh_size() << '\n';
        return kExitOk;
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open mesh file: " + path);
    TriangleMesh mesh = read_mesh(in);
    std::cout << "vertices: " << mesh.vertex_count() << '\n'
              << "triangles: " << mesh.triangle_count() << '\n'
              << "area: " << format_sci(mesh.total_area()) << '\n'
              << "h: " << format_sci(mesh.mesh_size()) << '\n'
              << "min angle (deg): " << format_sci(mesh.min_angle_deg()) << '\n';
    return kExitOk;
}

int cmd_run(CommonOptions& opt) {
    opt.finalize();
    const auto& s = opt.study;
    if (s.levels.size() != 1 || s.taus.size() != 1)
        throw std::invalid_argument("run: give exactly one level and one tau");
    ProblemSpec problem = make_problem(s.problem);
    TriangleMesh mesh = make_study_mesh(problem, s.levels[0]);
    FeSpace space = build_space(mesh, s.degree);
    SchemeConfig cfg;
    cfg.tau = snap_tau(s.taus[0], s.T);
    cfg.T = s.T;
    cfg.solver_tol = s.tol;
    cfg.init_mode = s.init;
    LeapFrogScheme scheme(problem, space, cfg);

    long total_iters = 0;
    int max_iters = 0, steps = 0;
    double e0 = 0.0, max_drift = 0.0;
    const bool conserves = problem.zero_source && problem.homogeneous_boundary;
    SchemeState final_state = scheme.run([&](const SchemeState& state, const StepReport* rep) {
        if (rep) {
            total_iters += rep->solver.iterations;
            max_iters = std::max(max_iters, rep->solver.iterations);
            ++steps;
        }
        if (conserves) {
            double e = scheme.discrete_energy(state).total;
            if (state.n == 1) e0 = e;
            max_drift = std::max(max_drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
        }
    });
    double err = scheme.solution_error(final_state);
    std::cout << "{\n"
              << "  \"problem\": \"" << s.problem << "\",\n"
              << "  \"degree\": " << s.degree << ",\n"
              << "  \"dofs\": " << space.dof_count() << ",\n"
              << "  \"h\": " << format_sci(mesh.mesh_size()) << ",\n"
              << "  \"tau\": " << format_sci(cfg.tau) << ",\n"
              << "  \"T\": " << format_sci(cfg.T) << ",\n"
              << "  \"l2_error\": " << format_sci(err) << ",\n"
              << "  \"energy_drift\": " << (conserves ? format_sci(max_drift) : "null") << ",\n"
              << "  \"solver_iterations_total\": " << total_iters << ",\n"
              << "  \"solver_iterations_max\": " << max_iters << ",\n"
              << "  \"steps\": " << steps << "\n"
              << "}\n";
    return kExitOk;
}

int cmd_converge(CommonOptions& opt, const std::string& study_kind) {
    opt.finalize();
    StudyConfig s = opt.study;
    ConvergenceResult result;
    std::string base;
    if (study_kind == "space") {
        if (s.paper_scale) s.taus.assign(s.levels.size(), std::pow(2.0, -14));
        result = converge_space(s);
        base = s.out_dir + "/converge_space_" + s.problem + "_p" + std::to_string(s.degree);
    } else {
        ProblemSpec probed = make_problem(s.problem);
        if (s.paper_scale && std::get_if<UnitSquare>(&probed.domain)) s.levels = {512};
        result = converge_time(s);
        base = s.out_dir + "/converge_time_" + s.problem + "_p" + std::to_string(s.degree);
    }
    convergence_csv(result).write(base + ".csv");
    write_convergence_svg(base + ".svg", result, study_kind == "time",
                          "L2 error, " + s.problem + ", P" + std::to_string(s.degree));
    print_convergence(result);
    std::cout << "wrote " << base << ".csv and .svg\n";
    if (opt.check && (result.order_avg < opt.order_min || result.order_avg > opt.order_max)) {
        std::cerr << "check failed: order_avg " << result.order_avg << " outside ["
                  << opt.order_min << ", " << opt.order_max << "]\n";
        return kExitCheckMiss;
    }
    return kExitOk;
}

int cmd_stability(CommonOptions& opt) {
    opt.finalize();
    auto series = stability_study(opt.study);
    std::string base = opt.study.out_dir + "/stability_" + opt.study.problem + "_p" +
                       std::to_string(opt.study.degree);
    stability_csv(series).write(base + ".csv");
    write_stability_svg(base + ".svg", series,
                        "Fixed-tau error vs h, " + opt.study.problem);
    for (const auto& ser : series) {
        std::cout << "tau=" << format_sci(ser.tau) << " plateau=" << (ser.plateau ? "yes" : "no")
                  << " plateau_value=" << format_sci(ser.plateau_value) << '\n';
    }
    std::cout << "wrote " << base << ".csv and .svg\n";
    if (opt.check) {
        for (const auto& ser : series) {
            if (!ser.plateau) {
                std::cerr << "check failed: no plateau at tau=" << ser.tau << '\n';
                return kExitCheckMiss;
            }
        }
    }
    return kExitOk;
}

int cmd_energy(CommonOptions& opt) {
    opt.finalize();
    StudyConfig s = opt.study;
    if (s.paper_scale) s.T = 100.0;
    EnergyTrace trace = energy_study(s);
    std::string base = s.out_dir + "/energy_" + s.problem + "_p" + std::to_string(s.degree);
    energy_csv(trace).write(base + ".csv");
    write_energy_svg(base + ".svg", trace, "Discrete energy evolution, " + s.problem);
    std::cout << "max relative drift: " << format_sci(trace.max_relative_drift) << '\n'
              << "wrote " << base << ".csv and .svg\n";
    if (opt.check && trace.max_relative_drift > opt.drift_max) {
        std::cerr << "check failed: drift " << trace.max_relative_drift << " > " << opt.drift_max
                  << '\n';
        return kExitCheckMiss;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-conservative leap-frog Galerkin solver for the cubic "
                 "Schrodinger equation with wave operator"};
    app.require_subcommand(1);

    // mesh gen | mesh info
    auto* mesh_cmd = app.add_subcommand("mesh", "generate or inspect mesh files");
    mesh_cmd->require_subcommand(1);
    std::string mesh_shape = "square", mesh_path;
    int mesh_n = 8, mesh_level = 3;
    auto* gen = mesh_cmd->add_subcommand("gen", "generate a mesh file");
    gen->add_option("--shape", mesh_shape, "square | disk");
    gen->add_option("--n", mesh_n, "square grid resolution");
    gen->add_option("--level", mesh_level, "disk refinement level");
    gen->add_option("--out", mesh_path, "output path")->required();
    auto* info = mesh_cmd->add_subcommand("info", "print mesh statistics");
    info->add_option("--in", mesh_path, "mesh file")->required();

    CommonOptions run_opt, conv_opt, stab_opt, energy_opt;
    auto* run = app.add_subcommand("run", "single simulation with a summary report");
    add_common_options(run, run_opt);

    auto* conv = app.add_subcommand("converge", "spatial or temporal convergence study");
    std::string study_kind = "space";
    conv->add_option("--study", study_kind, "space | time")->required();
    add_common_options(conv, conv_opt);
    conv->add_flag("--check", conv_opt.check, "exit 3 if order_avg is out of range");
    conv->add_option("--order-min", conv_opt.order_min, "check lower bound");
    conv->add_option("--order-max", conv_opt.order_max, "check upper bound");

    auto* stab = app.add_subcommand("stability", "fixed-tau error-vs-h probe");
    add_common_options(stab, stab_opt);
    stab->add_flag("--check", stab_opt.check, "exit 3 unless all series plateau");

    auto* energy = app.add_subcommand("energy", "discrete energy trace");
    add_common_options(energy, energy_opt);
    energy->add_flag("--check", energy_opt.check, "exit 3 if drift exceeds --drift-max");
    energy->add_option("--drift-max", energy_opt.drift_max, "check drift bound");

    try {
        // pre-scan for --config so file values act as defaults under the flags
        for (int i = 1; i + 1 < argc; ++i) {
            if (std::string(argv[i]) == "--config") {
                std::string path = argv[i + 1];
                for (CommonOptions* opt : {&run_opt, &conv_opt, &stab_opt, &energy_opt}) {
                    opt->config_path = path;
                    opt->apply_config();
                }
            }
        }
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_mesh("gen", mesh_shape, mesh_n, mesh_level, mesh_path);
        if (info->parsed()) return cmd_mesh("info", mesh_shape, mesh_n, mesh_level, mesh_path);
        if (run->parsed()) return cmd_run(run_opt);
        if (conv->parsed()) return cmd_converge(conv_opt, study_kind);
        if (stab->parsed()) return cmd_stability(stab_opt);
        if (energy->parsed()) return cmd_energy(energy_opt);
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << " (iterations " << e.stats.iterations
                  << ", residual " << e.stats.relative_residual << ")\n";
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
