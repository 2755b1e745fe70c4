#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "types.hpp"

namespace llfv {

enum class SolverBackend {
    direct,    // sparse LU, factorization reused across solves
    iterative, // BiCGSTAB with diagonal preconditioning, relative tol 1e-10
};

/// Specification of the constant-coefficient operator M* + shift * A with
/// Dirichlet rows replaced by identity rows.
struct LinearOperatorSpec {
    const SparseMat* mass = nullptr;
    const SparseMat* stiffness = nullptr;
    double shift = 0.0; // dt * eps
    std::vector<int> dirichlet_nodes;
    SolverBackend backend = SolverBackend::direct;
};

namespace detail {

using ColMajorMat = Eigen::SparseMatrix<double>;

/// Copy `a`, replacing the given rows by identity rows.
inline ColMajorMat with_identity_rows(const SparseMat& a, const std::vector<char>& constrained) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(a.nonZeros()) + constrained.size());
    for (int r = 0; r < a.outerSize(); ++r) {
        if (constrained[static_cast<size_t>(r)]) {
            trip.emplace_back(r, r, 1.0);
            continue;
        }
        for (SparseMat::InnerIterator it(a, r); it; ++it)
            trip.emplace_back(it.row(), it.col(), it.value());
    }
    ColMajorMat out(a.rows(), a.cols());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

} // namespace detail

/// Reusable solver context for M* + shift * A. Immutable once prepared;
/// concurrent solves are safe.
class FactorizedOperator {
public:
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs, const Eigen::VectorXd& bc_values) const {
        const auto& im = *impl_;
        const int n = static_cast<int>(im.op.rows());
        if (rhs.size() != n)
            throw std::invalid_argument("FactorizedOperator::solve: rhs size mismatch");
        if (!rhs.allFinite())
            throw std::invalid_argument("FactorizedOperator::solve: non-finite rhs");

        Eigen::VectorXd adjusted = rhs;
        for (int i = 0; i < n; ++i)
            if (im.constrained[static_cast<size_t>(i)])
                adjusted[i] = bc_values[i];

        Eigen::VectorXd x;
        if (im.backend == SolverBackend::direct) {
            x = im.lu->solve(adjusted);
            if (im.lu->info() != Eigen::Success)
                throw std::runtime_error("FactorizedOperator::solve: direct solve failed");
        } else {
            x = im.krylov->solve(adjusted);
            if (im.krylov->info() != Eigen::Success)
                throw std::runtime_error("FactorizedOperator::solve: Krylov breakdown, error " +
                                         std::to_string(im.krylov->error()));
        }

        const double resid = (im.op * x - adjusted).norm();
        const double scale = std::max(adjusted.norm(), 1e-300);
        if (!(resid <= 1e-10 * scale))
            throw std::runtime_error("FactorizedOperator::solve: residual " + std::to_string(resid / scale) +
                                     " exceeds 1e-10");

        for (int i = 0; i < n; ++i)
            if (im.constrained[static_cast<size_t>(i)])
                x[i] = bc_values[i];
        return x;
    }

    int size() const { return static_cast<int>(impl_->op.rows()); }

    const std::vector<char>& constrained() const { return impl_->constrained; }

private:
    friend FactorizedOperator prepare(const LinearOperatorSpec&);

    struct Impl {
        detail::ColMajorMat op;
        std::vector<char> constrained;
        SolverBackend backend = SolverBackend::direct;
        std::unique_ptr<Eigen::SparseLU<detail::ColMajorMat>> lu;
        std::unique_ptr<Eigen::BiCGSTAB<detail::ColMajorMat, Eigen::DiagonalPreconditioner<double>>> krylov;
    };

    std::shared_ptr<const Impl> impl_;
};

inline FactorizedOperator prepare(const LinearOperatorSpec& spec) {
    if (spec.mass == nullptr || spec.stiffness == nullptr)
        throw std::invalid_argument("prepare: missing matrices");
    if (spec.mass->rows() != spec.stiffness->rows() || spec.mass->cols() != spec.stiffness->cols())
        throw std::invalid_argument("prepare: matrix dimension mismatch");
    if (!(spec.shift >= 0.0) || !std::isfinite(spec.shift))
        throw std::invalid_argument("prepare: shift must be finite and >= 0");

    const int n = static_cast<int>(spec.mass->rows());
    auto impl = std::make_shared<FactorizedOperator::Impl>();
    impl->backend = spec.backend;
    impl->constrained.assign(static_cast<size_t>(n), 0);
    for (int i : spec.dirichlet_nodes) {
        if (i < 0 || i >= n)
            throw std::invalid_argument("prepare: dirichlet node out of range");
        impl->constrained[static_cast<size_t>(i)] = 1;
    }

    SparseMat combined = *spec.mass;
    if (spec.shift != 0.0)
        combined += spec.shift * (*spec.stiffness);
    impl->op = detail::with_identity_rows(combined, impl->constrained);

    if (spec.backend == SolverBackend::direct) {
        impl->lu = std::make_unique<Eigen::SparseLU<detail::ColMajorMat>>();
        impl->lu->compute(impl->op);
        if (impl->lu->info() != Eigen::Success)
            throw std::runtime_error("prepare: factorization failed (numerically singular operator): " +
                                     impl->lu->lastErrorMessage());
    } else {
        impl->krylov =
            std::make_unique<Eigen::BiCGSTAB<detail::ColMajorMat, Eigen::DiagonalPreconditioner<double>>>();
        impl->krylov->setTolerance(1e-12);
        impl->krylov->setMaxIterations(20 * n);
        impl->krylov->compute(impl->op);
        if (impl->krylov->info() != Eigen::Success)
            throw std::runtime_error("prepare: preconditioner setup failed");
    }

    FactorizedOperator op;
    op.impl_ = std::move(impl);
    return op;
}

} // namespace llfv
