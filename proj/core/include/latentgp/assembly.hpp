#pragma once

#include <Eigen/Dense>

#include "latentgp/load.hpp"
#include "latentgp/material.hpp"
#include "latentgp/mesh.hpp"

namespace latentgp {

// Internal force and consistent tangent of one bilinear quad under
// total-Lagrangian kinematics with 2x2 Gauss quadrature and unit
// thickness. `coords` holds reference node positions row-wise in
// connectivity order; `u_elem` the element displacements in dof order
// (ux0, uy0, ..., uy3). Throws InvertedElementError (tagged with
// `element_index`) when det F <= 0 at any quadrature point.
void element_force_stiffness(const Eigen::Matrix<double, 4, 2>& coords,
                             const Eigen::Matrix<double, 8, 1>& u_elem,
                             const MaterialParams& mat,
                             Eigen::Matrix<double, 8, 1>& f_int,
                             Eigen::Matrix<double, 8, 8>& k_elem,
                             long element_index = -1);

// Global internal force and tangent at displacement u, no boundary
// conditions applied.
void assemble_raw(const Mesh2D& mesh, const MaterialParams& mat, const Eigen::VectorXd& u,
                  Eigen::VectorXd& f_int, Eigen::MatrixXd& tangent);

// External load vector at unit load factor. Point loads land directly
// on the dofs of the snapped node; body forces integrate rho * b over
// the reference volume.
Eigen::VectorXd external_force(const Mesh2D& mesh, const MaterialParams& mat,
                               const LoadSpec& load);

// Dirichlet elimination in place: zero the fixed rows and columns and
// put a unit diagonal on fixed dofs; zero fixed residual entries.
void apply_constraints(const Mesh2D& mesh, Eigen::VectorXd& residual, Eigen::MatrixXd& tangent);
void apply_constraints(const Mesh2D& mesh, Eigen::VectorXd& vec);

struct AssemblyResult {
    Eigen::VectorXd residual;  // f_int - load_factor * f_ext, constrained
    Eigen::MatrixXd tangent;   // constrained
    double external_norm = 0.0;  // |load_factor * f_ext| over free dofs
};

AssemblyResult assemble(const Mesh2D& mesh, const MaterialParams& mat, const Eigen::VectorXd& u,
                        const LoadSpec& load, double load_factor);

}  // namespace latentgp
