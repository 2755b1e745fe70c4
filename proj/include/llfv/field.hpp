#pragma once

#include <functional>

#include "mesh.hpp"
#include "types.hpp"

namespace llfv {

/// Nodal 3-vector field (one magnetization vector per mesh node).
struct VectorField3 {
    NodeVectors values;

    VectorField3() = default;
    explicit VectorField3(NodeVectors v) : values(std::move(v)) {}

    int size() const { return static_cast<int>(values.rows()); }
    Vec3 node(int i) const { return values.row(i).transpose(); }
    void set_node(int i, const Vec3& v) { values.row(i) = v.transpose(); }

    static VectorField3 zero(int n) { return VectorField3(NodeVectors::Zero(n, 3)); }

    static VectorField3 constant(int n, const Vec3& v) {
        VectorField3 f = zero(n);
        f.values.rowwise() = v.transpose();
        return f;
    }

    static VectorField3 sample(const TriMesh& mesh, const std::function<Vec3(double, double)>& fn) {
        VectorField3 f = zero(mesh.node_count());
        for (int i = 0; i < mesh.node_count(); ++i)
            f.set_node(i, fn(mesh.nodes[i].x(), mesh.nodes[i].y()));
        return f;
    }
};

/// max over nodes of | |m| - 1 |
inline double max_unit_norm_deviation(const VectorField3& m) {
    double dev = 0.0;
    for (int i = 0; i < m.size(); ++i)
        dev = std::max(dev, std::abs(m.values.row(i).norm() - 1.0));
    return dev;
}

} // namespace llfv
