#include "latentgp/material.hpp"

#include <cmath>

#include "latentgp/errors.hpp"
#include "latentgp/text.hpp"

namespace latentgp {

std::pair<double, double> lame_from_engineering(double youngs_modulus, double poisson_ratio) {
    if (poisson_ratio >= 0.5 || poisson_ratio <= -1.0)
        throw IncompressibleMaterialError("Poisson ratio " + format_double(poisson_ratio) +
                                          " outside the compressible range (-1, 0.5)");
    double mu = youngs_modulus / (2.0 * (1.0 + poisson_ratio));
    double lambda = youngs_modulus * poisson_ratio /
                    ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
    return {mu, lambda};
}

MaterialParams MaterialParams::from_engineering(double youngs_modulus, double poisson_ratio,
                                                double density) {
    auto [mu, lambda] = lame_from_engineering(youngs_modulus, poisson_ratio);
    MaterialParams m;
    m.youngs_modulus = youngs_modulus;
    m.poisson_ratio = poisson_ratio;
    m.density = density;
    m.shear_modulus = mu;
    m.lame_first = lambda;
    return m;
}

DeformationState DeformationState::from_gradient(const Eigen::Matrix2d& F) {
    DeformationState s;
    s.F = F;
    s.J = F.determinant();
    if (s.J <= 0.0)
        throw InvertedElementError("deformation gradient has non-positive determinant " +
                                       format_double(s.J),
                                   -1);
    s.Ic = F.squaredNorm() + 1.0;  // out-of-plane stretch contributes 1
    return s;
}

double strain_energy(const DeformationState& s, const MaterialParams& mat) {
    double log_j = std::log(s.J);
    return 0.5 * mat.shear_modulus * (s.Ic - 3.0 - 2.0 * log_j) +
           0.25 * mat.lame_first * (s.J * s.J - 1.0 - 2.0 * log_j);
}

Eigen::Matrix2d piola_stress(const DeformationState& s, const MaterialParams& mat) {
    Eigen::Matrix2d f_inv_t = s.F.inverse().transpose();
    return mat.shear_modulus * (s.F - f_inv_t) +
           0.5 * mat.lame_first * (s.J * s.J - 1.0) * f_inv_t;
}

Tangent2222 material_tangent(const DeformationState& s, const MaterialParams& mat) {
    const Eigen::Matrix2d f_inv = s.F.inverse();
    const double mu = mat.shear_modulus;
    const double lambda = mat.lame_first;
    const double j_sq = s.J * s.J;

    Tangent2222 A;
    for (int i = 0; i < 2; ++i)
        for (int J = 0; J < 2; ++J)
            for (int k = 0; k < 2; ++k)
                for (int L = 0; L < 2; ++L) {
                    double delta = (i == k && J == L) ? 1.0 : 0.0;
                    // dP_iJ/dF_kL for the neo-Hookean stress above.
                    double v = mu * (delta + f_inv(J, k) * f_inv(L, i)) +
                               lambda * j_sq * f_inv(J, i) * f_inv(L, k) -
                               0.5 * lambda * (j_sq - 1.0) * f_inv(J, k) * f_inv(L, i);
                    A(2 * i + J, 2 * k + L) = v;
                }
    return A;
}

}  // namespace latentgp
