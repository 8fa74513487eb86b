#pragma once

#include <Eigen/Dense>
#include <utility>

namespace latentgp {

struct MaterialParams {
    double youngs_modulus = 0.0;
    double poisson_ratio = 0.0;
    double density = 0.0;  // used by body-force loads only
    double shear_modulus = 0.0;  // mu
    double lame_first = 0.0;     // lambda

    // Converts (E, nu) to the Lame pair. Throws IncompressibleMaterialError
    // for nu >= 0.5 or nu <= -1, where the conversion is singular.
    static MaterialParams from_engineering(double youngs_modulus, double poisson_ratio,
                                           double density = 0.0);
};

std::pair<double, double> lame_from_engineering(double youngs_modulus, double poisson_ratio);

// Plane-strain kinematics at a quadrature point. F is the in-plane
// 2x2 block of the deformation gradient; the out-of-plane stretch is
// fixed at 1, so J = det(F) and Ic = tr(F^T F) + 1.
struct DeformationState {
    Eigen::Matrix2d F;
    double J = 1.0;
    double Ic = 3.0;

    static DeformationState from_gradient(const Eigen::Matrix2d& F);
};

// Compressible neo-Hookean energy density:
//   W = mu/2 (Ic - 3 - 2 ln J) + lambda/4 (J^2 - 1 - 2 ln J).
double strain_energy(const DeformationState& s, const MaterialParams& mat);

// First Piola-Kirchhoff stress P = dW/dF (in-plane block):
//   P = mu (F - F^-T) + lambda/2 (J^2 - 1) F^-T.
Eigen::Matrix2d piola_stress(const DeformationState& s, const MaterialParams& mat);

// Material tangent A = dP/dF packed as a 4x4 matrix with composite
// row index 2*i+J and column index 2*k+L for A_{iJkL}. The packing
// preserves major symmetry: the matrix is symmetric.
using Tangent2222 = Eigen::Matrix4d;

Tangent2222 material_tangent(const DeformationState& s, const MaterialParams& mat);

inline double tangent_component(const Tangent2222& A, int i, int J, int k, int L) {
    return A(2 * i + J, 2 * k + L);
}

}  // namespace latentgp
