#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace llfv {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Row-compressed sparse matrix. Node-indexed operators are N x N;
/// operators acting on interleaved 3-vector unknowns are 3N x 3N with
/// node i occupying rows/columns 3i..3i+2.
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// One 3-vector per mesh node, stored row-wise.
using NodeVectors = Eigen::Matrix<double, Eigen::Dynamic, 3>;

} // namespace llfv
