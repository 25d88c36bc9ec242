#pragma once

#include "llgmid/integrator.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace llgmid {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` run configuration with `#` comments.
/// Defaults: alpha = 1, lex = 1, preset = exchange, mode = newton,
/// eps = 1e-8, iteration_cap = 100, linear_tol = 1e-14.
struct RunConfig {
    int N = 0;        // required by `simulate`
    double k = 0.0;   // required by `simulate`
    double T = 0.0;
    double alpha = 1.0;
    double eps = 1e-8;
    std::string mode = "newton";      // fixedpoint | newton | ideal
    std::string preset = "exchange";  // exchange | exchange_dmi | general
    double lex = 1.0;
    double ldm = 1.0;
    std::optional<std::string> pi_kind;  // zero | scaling | uniaxial (overrides preset)
    double pi_scale = 0.0;
    Vec3 pi_axis = Vec3(0.0, 0.0, 1.0);
    bool f_constant = false;  // `f = constant fx fy fz`; otherwise f = 0
    Vec3 f_value = Vec3::Zero();
    unsigned long seed = 0;
    std::string output = "out";
    int iteration_cap = 100;
    double linear_tol = 1e-14;
    int vtk_every = 0;
    bool paper_literal_pi = false;  // set by the CLI flag, not a config key

    // sweep grids
    std::vector<int> N_list;        // cfl default {2,4,8,16}; eps default {4,8}
    std::vector<double> k_list;     // eps-sweep step sizes, one per N_list entry
    double sweep_c = 0.00016;       // k-schedule c * q^j
    double sweep_q = 1.25;
    int sweep_jmax = 27;
    int eps_jmax = 24;              // accuracies 10^{-j/2}, j = 0..eps_jmax

    // general-preset coefficient matrices (row-major in the config)
    std::optional<std::array<Mat3, 3>> A_general;
    std::optional<std::array<Mat3, 3>> J_general;
};

/// Parses and validates; errors carry the offending line number and key.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

SchemeMode scheme_mode(const RunConfig& cfg);

/// Materializes the configured model on a mesh (the source field f needs
/// nodal values).
MaterialModel make_model(const RunConfig& cfg, const Mesh& mesh);

SolverOptions solver_options(const RunConfig& cfg);

}  // namespace llgmid
