// Command-line driver: single simulations, CFL feasibility sweeps, solver
// accuracy sweeps, and the library's property suite.

#include "llgmid/config.hpp"
#include "llgmid/diagnostics.hpp"
#include "llgmid/io.hpp"
#include "llgmid/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace llgmid;

namespace {

RunConfig load_with_flags(const std::string& path, const std::string& output_override,
                          int vtk_every_override, bool paper_literal_pi) {
    RunConfig cfg = load_config_file(path);
    if (!output_override.empty()) cfg.output = output_override;
    if (vtk_every_override >= 0) cfg.vtk_every = vtk_every_override;
    cfg.paper_literal_pi = paper_literal_pi;
    return cfg;
}

void echo_config(const std::string& config_path, const std::string& out_dir) {
    std::ifstream in(config_path);
    std::ofstream out(out_dir + "/run_config.txt");
    out << in.rdbuf();
}

int run_simulate(const std::string& config_path, const RunConfig& cfg) {
    if (cfg.N < 1 || !(cfg.k > 0.0) || !(cfg.T > 0.0)) {
        std::cerr << "simulate needs positive N, k, T in the config\n";
        return 2;
    }
    const Mesh mesh = build_unit_cube_mesh(cfg.N);
    const MaterialModel model = make_model(cfg, mesh);
    const System sys = prepare_system(mesh, model);
    const NodalField m0 = hedgehog_initial(mesh);

    fs::create_directories(cfg.output);
    echo_config(config_path, cfg.output);

    RunOptions opts;
    opts.solver = solver_options(cfg);
    if (cfg.vtk_every > 0) {
        const int every = cfg.vtk_every;
        const std::string dir = cfg.output;
        opts.on_step = [&mesh, every, dir](int step, const NodalField& m) {
            if ((step + 1) % every == 0) {
                char name[64];
                std::snprintf(name, sizeof(name), "/state_%06d.vtk", step + 1);
                write_vtk_snapshot(mesh, m, dir + name);
            }
        };
        write_vtk_snapshot(mesh, m0, dir + "/state_000000.vtk");
    }

    Trajectory traj = run(sys, m0, cfg.k, cfg.T, scheme_mode(cfg), opts);
    traj.config_echo = config_path;
    write_trajectory_csv(traj, cfg.output + "/trajectory.csv");
    if (cfg.vtk_every > 0) write_vtk_snapshot(mesh, traj.final_state, cfg.output + "/state_final.vtk");

    std::cout << "steps: " << traj.records.size() << "\n"
              << "feasible: " << (traj.feasible ? "yes" : "no") << "\n";
    if (!traj.feasible) std::cout << "first infeasible step: " << traj.infeasible_step << "\n";
    std::cout << "final energy: " << format_g17(traj.final_energy) << "\n";
    if (!traj.records.empty())
        std::cout << "energy-identity residual: "
                  << format_g17(traj.records.back().identity_residual) << "\n";
    std::cout << "wrote " << cfg.output << "/trajectory.csv\n";
    return traj.feasible ? 0 : 1;
}

int run_cfl_sweep(const std::string& config_path, RunConfig cfg) {
    if (cfg.N_list.empty()) cfg.N_list = {2, 4, 8, 16};
    const KSchedule schedule{cfg.sweep_c, cfg.sweep_q, cfg.sweep_jmax};
    fs::create_directories(cfg.output);
    echo_config(config_path, cfg.output);

    std::vector<std::pair<std::string, LineFit>> fits;
    for (SolverKind kind : {SolverKind::FixedPoint, SolverKind::Newton}) {
        const CflSweepResult res = cfl_sweep(cfg.N_list, schedule, cfg.eps, kind,
                                             solver_options(cfg));
        const std::string tag = solver_name(kind);
        write_cfl_points_csv(res, cfg.output + "/cfl_points_" + tag + ".csv");
        write_cfl_thresholds_csv(res, cfg.output + "/cfl_thresholds_" + tag + ".csv");
        for (const auto& th : res.thresholds) {
            std::cout << tag << " h=" << format_g17(th.h);
            if (th.bracketed)
                std::cout << " k_thresh=" << format_g17(th.k_thresh) << " (bracket ["
                          << format_g17(th.k_last_feasible) << ", "
                          << format_g17(th.k_first_infeasible) << "])\n";
            else
                std::cout << " k_thresh not bracketed by the schedule\n";
        }
        if (res.fit_valid) {
            std::cout << tag << " slope beta=" << format_g17(res.fit.slope)
                      << " (rms residual " << format_g17(res.fit.residual) << ")\n";
            fits.emplace_back(tag, res.fit);
        }
    }
    if (!fits.empty()) write_fits_csv(fits, cfg.output + "/cfl_fits.csv");
    std::cout << "threshold estimator: geometric mean of the bracketing schedule points\n";
    return 0;
}

int run_eps_sweep(const std::string& config_path, RunConfig cfg) {
    if (cfg.N_list.empty()) cfg.N_list = {4, 8};
    if (cfg.k_list.empty()) {
        // roughly half the CFL threshold of each mesh size
        for (int N : cfg.N_list) cfg.k_list.push_back(0.095 / (double(N) * N));
    }
    if (cfg.k_list.size() != cfg.N_list.size()) {
        std::cerr << "k_list must match N_list\n";
        return 2;
    }
    if (!(cfg.T > 0.0)) cfg.T = 5.0;
    const std::vector<double> eps_list = default_eps_list(cfg.eps_jmax);
    fs::create_directories(cfg.output);
    echo_config(config_path, cfg.output);

    std::vector<std::pair<std::string, LineFit>> fits;
    for (SolverKind kind : {SolverKind::FixedPoint, SolverKind::Newton}) {
        const EpsSweepResult res =
            eps_sweep(cfg.N_list, cfg.k_list, eps_list, cfg.T, kind, solver_options(cfg));
        const std::string tag = solver_name(kind);
        write_eps_points_csv(res, cfg.output + "/eps_points_" + tag + ".csv");
        for (const auto& [h, fit] : res.fits) {
            std::cout << tag << " h=" << format_g17(h) << " deviation slope "
                      << format_g17(fit.slope) << "\n";
            fits.emplace_back(tag + "_h=" + format_g17(h), fit);
        }
    }
    if (!fits.empty()) write_fits_csv(fits, cfg.output + "/eps_fits.csv");
    return 0;
}

int run_validate(bool paper_literal_pi, unsigned long seed) {
    ValidateOptions opts;
    opts.paper_literal_pi = paper_literal_pi;
    opts.seed = seed;
    const auto checks = validate(opts);
    bool all_pass = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  value="
                  << format_g17(c.value) << "  " << c.detail << "\n";
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mass-lumped midpoint integrator for Landau-Lifshitz-Gilbert dynamics"};
    app.require_subcommand(1);

    std::string config_path, output_override;
    int vtk_every = -1;
    bool paper_literal_pi = false;
    unsigned long seed = 20240517;

    auto* sim = app.add_subcommand("simulate", "integrate one configured trajectory");
    sim->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    sim->add_option("--output", output_override, "output directory");
    sim->add_option("--vtk-every", vtk_every, "write a VTK snapshot every n steps");
    sim->add_flag("--paper-literal-pi", paper_literal_pi,
                  "use the literal ldm/(2 lex^2) scaling in the DMI preset");

    auto* cfl = app.add_subcommand("cfl-sweep", "time-step feasibility study over mesh sizes");
    cfl->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    cfl->add_option("--output", output_override, "output directory");
    cfl->add_flag("--paper-literal-pi", paper_literal_pi);

    auto* eps = app.add_subcommand("eps-sweep", "solver-accuracy vs unit-length study");
    eps->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    eps->add_option("--output", output_override, "output directory");
    eps->add_flag("--paper-literal-pi", paper_literal_pi);

    auto* val = app.add_subcommand("validate", "run the property suite");
    val->add_flag("--paper-literal-pi", paper_literal_pi);
    val->add_option("--seed", seed, "RNG seed for the random-field checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(sim))
            return run_simulate(config_path,
                                load_with_flags(config_path, output_override, vtk_every,
                                                paper_literal_pi));
        if (app.got_subcommand(cfl))
            return run_cfl_sweep(config_path, load_with_flags(config_path, output_override, -1,
                                                              paper_literal_pi));
        if (app.got_subcommand(eps))
            return run_eps_sweep(config_path, load_with_flags(config_path, output_override, -1,
                                                              paper_literal_pi));
        if (app.got_subcommand(val)) return run_validate(paper_literal_pi, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
