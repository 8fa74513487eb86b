#include "latentgp/assembly.hpp"

#include <cmath>

#include "latentgp/errors.hpp"
#include "latentgp/text.hpp"

namespace latentgp {
namespace {

constexpr double kGaussAbscissa = 0.57735026918962576451;  // 1/sqrt(3)

// Shape functions and parent-space derivatives of the bilinear quad at
// (xi, eta), node order (-1,-1), (1,-1), (1,1), (-1,1).
void shape_functions(double xi, double eta, Eigen::Matrix<double, 4, 1>& n,
                     Eigen::Matrix<double, 4, 2>& dn) {
    n(0) = 0.25 * (1.0 - xi) * (1.0 - eta);
    n(1) = 0.25 * (1.0 + xi) * (1.0 - eta);
    n(2) = 0.25 * (1.0 + xi) * (1.0 + eta);
    n(3) = 0.25 * (1.0 - xi) * (1.0 + eta);

    dn(0, 0) = -0.25 * (1.0 - eta);
    dn(1, 0) = 0.25 * (1.0 - eta);
    dn(2, 0) = 0.25 * (1.0 + eta);
    dn(3, 0) = -0.25 * (1.0 + eta);

    dn(0, 1) = -0.25 * (1.0 - xi);
    dn(1, 1) = -0.25 * (1.0 + xi);
    dn(2, 1) = 0.25 * (1.0 + xi);
    dn(3, 1) = 0.25 * (1.0 - xi);
}

}  // namespace

void element_force_stiffness(const Eigen::Matrix<double, 4, 2>& coords,
                             const Eigen::Matrix<double, 8, 1>& u_elem,
                             const MaterialParams& mat,
                             Eigen::Matrix<double, 8, 1>& f_int,
                             Eigen::Matrix<double, 8, 8>& k_elem,
                             long element_index) {
    f_int.setZero();
    k_elem.setZero();

    Eigen::Matrix<double, 4, 2> u_nodes;
    for (int a = 0; a < 4; ++a) {
        u_nodes(a, 0) = u_elem(2 * a);
        u_nodes(a, 1) = u_elem(2 * a + 1);
    }

    const double pts[2] = {-kGaussAbscissa, kGaussAbscissa};
    Eigen::Matrix<double, 4, 1> n;
    Eigen::Matrix<double, 4, 2> dn;

    for (double eta : pts)
        for (double xi : pts) {
            shape_functions(xi, eta, n, dn);

            // Reference-space jacobian and shape gradients.
            Eigen::Matrix2d jac = coords.transpose() * dn;  // dX/dxi
            double det_jac = jac.determinant();
            if (det_jac <= 0.0)
                throw InvertedElementError(
                    "reference element jacobian is non-positive (" + format_double(det_jac) +
                        ") in element " + format_int(element_index),
                    element_index);
            Eigen::Matrix<double, 4, 2> grad = dn * jac.inverse();  // dN/dX, row a

            Eigen::Matrix2d f_grad =
                Eigen::Matrix2d::Identity() + u_nodes.transpose() * grad;
            if (f_grad.determinant() <= 0.0)
                throw InvertedElementError(
                    "element " + format_int(element_index) +
                        " inverted: det F = " + format_double(f_grad.determinant()),
                    element_index);
            DeformationState state = DeformationState::from_gradient(f_grad);
            Eigen::Matrix2d piola = piola_stress(state, mat);
            Tangent2222 tangent = material_tangent(state, mat);

            const double w = det_jac;  // unit Gauss weights, unit thickness

            for (int a = 0; a < 4; ++a)
                for (int i = 0; i < 2; ++i) {
                    double fa = piola(i, 0) * grad(a, 0) + piola(i, 1) * grad(a, 1);
                    f_int(2 * a + i) += w * fa;
                }

            for (int a = 0; a < 4; ++a)
                for (int i = 0; i < 2; ++i)
                    for (int b = 0; b < 4; ++b)
                        for (int k = 0; k < 2; ++k) {
                            double acc = 0.0;
                            for (int J = 0; J < 2; ++J)
                                for (int L = 0; L < 2; ++L)
                                    acc += grad(a, J) * tangent(2 * i + J, 2 * k + L) *
                                           grad(b, L);
                            k_elem(2 * a + i, 2 * b + k) += w * acc;
                        }
        }
}

void assemble_raw(const Mesh2D& mesh, const MaterialParams& mat, const Eigen::VectorXd& u,
                  Eigen::VectorXd& f_int, Eigen::MatrixXd& tangent) {
    const int n = mesh.n_dofs();
    if (u.size() != n)
        throw ShapeError("displacement vector has length " + format_int(u.size()) +
                         ", mesh has " + format_int(n) + " dofs");
    f_int.setZero(n);
    tangent.setZero(n, n);

    Eigen::Matrix<double, 4, 2> coords;
    Eigen::Matrix<double, 8, 1> u_elem;
    Eigen::Matrix<double, 8, 1> f_elem;
    Eigen::Matrix<double, 8, 8> k_elem;

    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const auto& conn = mesh.elements[e];
        for (int a = 0; a < 4; ++a) {
            coords(a, 0) = mesh.node_coords(conn[a], 0);
            coords(a, 1) = mesh.node_coords(conn[a], 1);
            u_elem(2 * a) = u(2 * conn[a]);
            u_elem(2 * a + 1) = u(2 * conn[a] + 1);
        }
        element_force_stiffness(coords, u_elem, mat, f_elem, k_elem,
                                static_cast<long>(e));
        for (int a = 0; a < 4; ++a)
            for (int i = 0; i < 2; ++i) {
                int ga = 2 * conn[a] + i;
                f_int(ga) += f_elem(2 * a + i);
                for (int b = 0; b < 4; ++b)
                    for (int k = 0; k < 2; ++k)
                        tangent(ga, 2 * conn[b] + k) += k_elem(2 * a + i, 2 * b + k);
            }
    }
}

Eigen::VectorXd external_force(const Mesh2D& mesh, const MaterialParams& mat,
                               const LoadSpec& load) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.n_dofs());

    if (load.kind == LoadKind::PointLoad) {
        int node = node_for_distance(mesh, load.d);
        f(2 * node) += load.fx;
        f(2 * node + 1) += load.fy;
        return f;
    }

    // Body force: integrate rho * b with the same quadrature as the
    // stiffness. Dead load, independent of deformation.
    const double pts[2] = {-kGaussAbscissa, kGaussAbscissa};
    Eigen::Matrix<double, 4, 1> n;
    Eigen::Matrix<double, 4, 2> dn;
    Eigen::Matrix<double, 4, 2> coords;
    for (const auto& conn : mesh.elements) {
        for (int a = 0; a < 4; ++a) {
            coords(a, 0) = mesh.node_coords(conn[a], 0);
            coords(a, 1) = mesh.node_coords(conn[a], 1);
        }
        for (double eta : pts)
            for (double xi : pts) {
                shape_functions(xi, eta, n, dn);
                double det_jac = (coords.transpose() * dn).determinant();
                double w = det_jac * mat.density;
                for (int a = 0; a < 4; ++a) {
                    f(2 * conn[a]) += w * n(a) * load.bx;
                    f(2 * conn[a] + 1) += w * n(a) * load.by;
                }
            }
    }
    return f;
}

void apply_constraints(const Mesh2D& mesh, Eigen::VectorXd& residual, Eigen::MatrixXd& tangent) {
    for (int d : mesh.fixed_dofs) {
        residual(d) = 0.0;
        tangent.row(d).setZero();
        tangent.col(d).setZero();
        tangent(d, d) = 1.0;
    }
}

void apply_constraints(const Mesh2D& mesh, Eigen::VectorXd& vec) {
    for (int d : mesh.fixed_dofs)
        vec(d) = 0.0;
}

AssemblyResult assemble(const Mesh2D& mesh, const MaterialParams& mat, const Eigen::VectorXd& u,
                        const LoadSpec& load, double load_factor) {
    AssemblyResult out;
    Eigen::VectorXd f_int;
    assemble_raw(mesh, mat, u, f_int, out.tangent);

    Eigen::VectorXd f_ext = load_factor * external_force(mesh, mat, load);
    apply_constraints(mesh, f_ext);
    out.external_norm = f_ext.norm();

    out.residual = f_int - f_ext;
    apply_constraints(mesh, out.residual, out.tangent);
    return out;
}

}  // namespace latentgp
