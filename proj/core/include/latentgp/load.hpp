#pragma once

#include <Eigen/Dense>

namespace latentgp {

// External load families. PointLoad: concentrated force (fx, fy) at a
// loadable node selected by arc distance d; its input vector is
// (fx, fy, d). BodyForce: uniform acceleration field (bx, by) in N/kg
// scaled by material density; input vector (bx, by).
enum class LoadKind { PointLoad, BodyForce };

struct LoadSpec {
    LoadKind kind = LoadKind::PointLoad;
    double fx = 0.0;
    double fy = 0.0;
    double d = 0.0;
    double bx = 0.0;
    double by = 0.0;

    static LoadSpec point(double fx, double fy, double d);
    static LoadSpec body(double bx, double by);

    // Input-vector length for the surrogate for each family.
    static int input_dim(LoadKind kind);

    Eigen::VectorXd to_vector() const;
    static LoadSpec from_vector(LoadKind kind, const Eigen::VectorXd& v);
};

const char* load_kind_name(LoadKind kind);
LoadKind load_kind_from_name(const std::string& name);

}  // namespace latentgp
