#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "latentgp/errors.hpp"
#include "latentgp/material.hpp"
#include "latentgp/rng.hpp"

using namespace latentgp;

namespace {

// Central finite difference of the energy density, the independent
// oracle for the analytic stress.
Eigen::Matrix2d fd_stress(const Eigen::Matrix2d& F, const MaterialParams& mat, double h) {
    Eigen::Matrix2d P;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Eigen::Matrix2d Fp = F, Fm = F;
            Fp(i, j) += h;
            Fm(i, j) -= h;
            P(i, j) = (strain_energy(DeformationState::from_gradient(Fp), mat) -
                       strain_energy(DeformationState::from_gradient(Fm), mat)) /
                      (2.0 * h);
        }
    return P;
}

Tangent2222 fd_tangent(const Eigen::Matrix2d& F, const MaterialParams& mat, double h) {
    Tangent2222 A;
    for (int k = 0; k < 2; ++k)
        for (int L = 0; L < 2; ++L) {
            Eigen::Matrix2d Fp = F, Fm = F;
            Fp(k, L) += h;
            Fm(k, L) -= h;
            Eigen::Matrix2d dP = (piola_stress(DeformationState::from_gradient(Fp), mat) -
                                  piola_stress(DeformationState::from_gradient(Fm), mat)) /
                                 (2.0 * h);
            for (int i = 0; i < 2; ++i)
                for (int J = 0; J < 2; ++J)
                    A(2 * i + J, 2 * k + L) = dP(i, J);
        }
    return A;
}

Eigen::Matrix2d random_admissible_f(KeyedStream& rng) {
    while (true) {
        Eigen::Matrix2d F = Eigen::Matrix2d::Identity();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                F(i, j) += rng.uniform(-0.3, 0.3);
        if (F.determinant() > 0.3)
            return F;
    }
}

MaterialParams unit_material(double mu, double lambda) {
    MaterialParams m;
    m.shear_modulus = mu;
    m.lame_first = lambda;
    return m;
}

}  // namespace

TEST_SUITE("material") {

TEST_CASE("engineering constants convert to the Lame pair") {
    auto [mu0, la0] = lame_from_engineering(1.0, 0.0);
    CHECK(mu0 == 0.5);
    CHECK(la0 == 0.0);

    auto [mu1, la1] = lame_from_engineering(500.0, 0.4);
    CHECK(mu1 == doctest::Approx(178.57142857142858).epsilon(1e-14));
    CHECK(la1 == doctest::Approx(714.2857142857143).epsilon(1e-14));

    auto [mu2, la2] = lame_from_engineering(5000.0, 0.45);
    CHECK(mu2 == doctest::Approx(1724.1379310344828).epsilon(1e-14));
    CHECK(la2 == doctest::Approx(15517.241379310344).epsilon(1e-14));

    CHECK_THROWS_AS(lame_from_engineering(500.0, 0.5), IncompressibleMaterialError);
    CHECK_THROWS_AS(lame_from_engineering(500.0, -1.0), IncompressibleMaterialError);

    MaterialParams m = MaterialParams::from_engineering(500.0, 0.4, 1000.0);
    CHECK(m.shear_modulus == mu1);
    CHECK(m.lame_first == la1);
    CHECK(m.density == 1000.0);
}

TEST_CASE("deformation state derives J and Ic") {
    Eigen::Matrix2d F;
    F << 1.1, 0.0, 0.0, 1.0;
    DeformationState s = DeformationState::from_gradient(F);
    CHECK(s.J == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(s.Ic == doctest::Approx(1.21 + 1.0 + 1.0).epsilon(1e-15));

    Eigen::Matrix2d flipped;
    flipped << -1.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(DeformationState::from_gradient(flipped), InvertedElementError);
}

TEST_CASE("strain energy closed-form values") {
    MaterialParams m = unit_material(1.0, 1.0);

    CHECK(strain_energy(DeformationState::from_gradient(Eigen::Matrix2d::Identity()), m) ==
          0.0);

    // Simple shear keeps J = 1, so only the isochoric term survives:
    // W = mu * gamma^2 / 2, independent of lambda.
    Eigen::Matrix2d shear;
    shear << 1.0, 0.3, 0.0, 1.0;
    CHECK(strain_energy(DeformationState::from_gradient(shear), unit_material(1.0, 2.7)) ==
          doctest::Approx(0.045).epsilon(1e-14));

    // Uniaxial in-plane stretch, frozen from an arbitrary-precision
    // evaluation of the energy density.
    Eigen::Matrix2d stretch;
    stretch << 1.1, 0.0, 0.0, 1.0;
    CHECK(strain_energy(DeformationState::from_gradient(stretch), m) ==
          doctest::Approx(0.0145347302935127099).epsilon(1e-14));
}

TEST_CASE("energy is non-negative with its minimum at identity") {
    MaterialParams m = unit_material(2.0, 3.0);
    KeyedStream rng{101};
    for (int t = 0; t < 200; ++t) {
        Eigen::Matrix2d F = random_admissible_f(rng);
        CHECK(strain_energy(DeformationState::from_gradient(F), m) >= 0.0);
    }
}

TEST_CASE("stress vanishes in the reference state") {
    MaterialParams m = unit_material(3.0, 5.0);
    Eigen::Matrix2d P =
        piola_stress(DeformationState::from_gradient(Eigen::Matrix2d::Identity()), m);
    CHECK(P.norm() == 0.0);
}

TEST_CASE("stress matches finite differences of the energy") {
    MaterialParams m = unit_material(1.7, 4.2);
    KeyedStream rng{55};
    for (int t = 0; t < 100; ++t) {
        Eigen::Matrix2d F = random_admissible_f(rng);
        Eigen::Matrix2d P = piola_stress(DeformationState::from_gradient(F), m);
        Eigen::Matrix2d Pfd = fd_stress(F, m, 1e-6);
        double scale = std::max(P.cwiseAbs().maxCoeff(), 1.0);
        CHECK((P - Pfd).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
}

TEST_CASE("tangent matches finite differences of the stress") {
    MaterialParams m = unit_material(1.7, 4.2);
    KeyedStream rng{56};
    for (int t = 0; t < 100; ++t) {
        Eigen::Matrix2d F = random_admissible_f(rng);
        Tangent2222 A = material_tangent(DeformationState::from_gradient(F), m);
        Tangent2222 Afd = fd_tangent(F, m, 1e-6);
        double scale = std::max(A.cwiseAbs().maxCoeff(), 1.0);
        CHECK((A - Afd).cwiseAbs().maxCoeff() / scale < 1e-5);
    }

    // The pinned spot check from the oracle list.
    Eigen::Matrix2d F;
    F << 1.05, 0.02, 0.01, 0.98;
    Tangent2222 A = material_tangent(DeformationState::from_gradient(F), m);
    Tangent2222 Afd = fd_tangent(F, m, 1e-6);
    CHECK((A - Afd).cwiseAbs().maxCoeff() / A.cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("tangent has major symmetry and the isotropic structure at identity") {
    MaterialParams m = unit_material(1.7, 4.2);
    KeyedStream rng{57};
    for (int t = 0; t < 50; ++t) {
        Tangent2222 A =
            material_tangent(DeformationState::from_gradient(random_admissible_f(rng)), m);
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <
              1e-12 * A.cwiseAbs().maxCoeff());
    }

    // At F = I the tangent is the plane-strain Hooke tensor:
    // A_iJkL = mu (delta_ik delta_JL + delta_iL delta_Jk) + lambda delta_iJ delta_kL.
    Tangent2222 A =
        material_tangent(DeformationState::from_gradient(Eigen::Matrix2d::Identity()), m);
    double mu = m.shear_modulus, la = m.lame_first;
    CHECK(tangent_component(A, 0, 0, 0, 0) == doctest::Approx(2 * mu + la).epsilon(1e-14));
    CHECK(tangent_component(A, 1, 1, 1, 1) == doctest::Approx(2 * mu + la).epsilon(1e-14));
    CHECK(tangent_component(A, 0, 0, 1, 1) == doctest::Approx(la).epsilon(1e-14));
    CHECK(tangent_component(A, 0, 1, 0, 1) == doctest::Approx(mu).epsilon(1e-14));
    CHECK(tangent_component(A, 0, 1, 1, 0) == doctest::Approx(mu).epsilon(1e-14));
    CHECK(tangent_component(A, 0, 0, 0, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

}  // TEST_SUITE
