#include "latentgp/load.hpp"

#include <string>

#include "latentgp/errors.hpp"
#include "latentgp/text.hpp"

namespace latentgp {

LoadSpec LoadSpec::point(double fx, double fy, double d) {
    LoadSpec s;
    s.kind = LoadKind::PointLoad;
    s.fx = fx;
    s.fy = fy;
    s.d = d;
    return s;
}

LoadSpec LoadSpec::body(double bx, double by) {
    LoadSpec s;
    s.kind = LoadKind::BodyForce;
    s.bx = bx;
    s.by = by;
    return s;
}

int LoadSpec::input_dim(LoadKind kind) {
    return kind == LoadKind::PointLoad ? 3 : 2;
}

Eigen::VectorXd LoadSpec::to_vector() const {
    if (kind == LoadKind::PointLoad) {
        Eigen::Vector3d v(fx, fy, d);
        return v;
    }
    Eigen::Vector2d v(bx, by);
    return v;
}

LoadSpec LoadSpec::from_vector(LoadKind kind, const Eigen::VectorXd& v) {
    if (v.size() != input_dim(kind))
        throw ShapeError("load vector has length " + format_int(v.size()) + ", expected " +
                         format_int(input_dim(kind)));
    if (kind == LoadKind::PointLoad)
        return point(v[0], v[1], v[2]);
    return body(v[0], v[1]);
}

const char* load_kind_name(LoadKind kind) {
    return kind == LoadKind::PointLoad ? "point_load" : "body_force";
}

LoadKind load_kind_from_name(const std::string& name) {
    if (name == "point_load")
        return LoadKind::PointLoad;
    if (name == "body_force")
        return LoadKind::BodyForce;
    throw ConfigError("unknown load kind '" + name + "'");
}

}  // namespace latentgp
