#pragma once

#include "llgmid/model.hpp"

#include <random>
#include <string>
#include <vector>

namespace llgmid {

/// Empirical constants of the discrete setting. None of these are
/// hard-coded anywhere; they are measured and reported.
struct MeasuredConstants {
    double kappa = 0.0;            // h_max / min vol^(1/3)
    double c_inv = 0.0;            // inverse-estimate constant, per mesh
    double norm_equiv_max = 0.0;   // max ||phi||_h / ||phi||_L2 observed
    double norm_equiv_min = 0.0;
    double c1 = 0.0;               // largest sampled continuity ratio of a_loc
    double c1_bound = 0.0;         // analytic continuity bound from coefficient norms
    double c2 = 0.0;               // coercivity in the shifted (Garding) sense
    double c3 = 0.0;               // the L2 shift used for c2
    double a0 = 0.0;               // smallest eigenvalue of the A_d
    double c_pi = 0.0;             // operator norm of pi
};

NodalField random_field(const Mesh& mesh, std::mt19937_64& rng);

/// Exact inverse-estimate constant: h_max * sqrt(lambda_max) of the
/// stiffness/consistent-mass pencil, by power iteration (mass solves by CG).
double inverse_estimate_constant(const Mesh& mesh);

MeasuredConstants measure_constants(const Mesh& mesh, const MaterialModel& model,
                                    std::mt19937_64& rng, int samples = 200);

struct PropertyCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

struct ValidateOptions {
    bool paper_literal_pi = false;
    unsigned long seed = 20240517;
};

/// Full property suite: norm equivalence, inverse estimate, Riesz-map
/// identities, operator self-adjointness, Garding/continuity bounds, the
/// energy gradient check, the completed-square identity, the DMI curl
/// equivalence (reported as failing with the measured zeroth-order gap when
/// paper_literal_pi is set), and cross-solver agreement on a small problem.
std::vector<PropertyCheck> validate(const ValidateOptions& opts = {});

}  // namespace llgmid
