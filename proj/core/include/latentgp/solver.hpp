#pragma once

#include <Eigen/Dense>

#include "latentgp/assembly.hpp"

namespace latentgp {

struct SolveSettings {
    int load_increments = 10;
    double tolerance = 1e-9;  // relative to the applied load norm
    int max_newton_iterations = 25;
    int max_step_halvings = 6;
    bool allow_step_growth = true;
};

struct SolveReport {
    int increments = 0;         // accepted load increments
    int newton_iterations = 0;  // residual evaluations across all attempts
    int step_halvings = 0;
    double final_residual = 0.0;
};

// Incremental Newton solve of the static equilibrium f_int(u) = lf * f_ext
// ramped to lf = 1. A failed increment (iteration budget exhausted,
// non-finite residual, or an inverted element) halves the step; after two
// clean increments the step may grow back. Exhausting max_step_halvings
// raises NonConvergenceError with the last converged load factor, or
// rethrows the inversion error if that is what kept failing.
Eigen::VectorXd solve_static(const Mesh2D& mesh, const MaterialParams& mat,
                             const LoadSpec& load, const SolveSettings& settings = {},
                             SolveReport* report = nullptr);

}  // namespace latentgp
