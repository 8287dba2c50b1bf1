#include "cycleflow/solver.hpp"

#include <chrono>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include "cycleflow/errors.hpp"

namespace cycleflow {

namespace {
double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}
}  // namespace

struct SpdSolver::Impl {
    SolveMode mode = SolveMode::Sparse;
    Eigen::Index dim = 0;
    double factor_seconds = 0.0;
    std::optional<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> sparse;
    std::optional<Eigen::LLT<Eigen::MatrixXd>> dense;
};

SpdSolver::SpdSolver(const Eigen::SparseMatrix<double>& matrix, SolveMode mode)
    : impl_(std::make_unique<Impl>()) {
    if (matrix.rows() != matrix.cols()) {
        throw ValidationError("SPD solve needs a square matrix");
    }
    impl_->mode = mode;
    impl_->dim = matrix.rows();
    if (impl_->dim == 0) return;

    const double start = now_seconds();
    if (mode == SolveMode::Sparse) {
        impl_->sparse.emplace();
        impl_->sparse->compute(matrix);
        if (impl_->sparse->info() != Eigen::Success) {
            throw NumericalError("sparse Cholesky failed: matrix is not positive definite");
        }
    } else {
        impl_->dense.emplace(Eigen::MatrixXd(matrix));
        if (impl_->dense->info() != Eigen::Success) {
            throw NumericalError("dense Cholesky failed: matrix is not positive definite");
        }
    }
    impl_->factor_seconds = now_seconds() - start;
}

SpdSolver::SpdSolver(const Eigen::MatrixXd& matrix) : impl_(std::make_unique<Impl>()) {
    if (matrix.rows() != matrix.cols()) {
        throw ValidationError("SPD solve needs a square matrix");
    }
    impl_->mode = SolveMode::Dense;
    impl_->dim = matrix.rows();
    if (impl_->dim == 0) return;

    const double start = now_seconds();
    impl_->dense.emplace(matrix);
    if (impl_->dense->info() != Eigen::Success) {
        throw NumericalError("dense Cholesky failed: matrix is not positive definite");
    }
    impl_->factor_seconds = now_seconds() - start;
}

SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

Eigen::MatrixXd SpdSolver::solve(const Eigen::MatrixXd& rhs) const {
    if (rhs.rows() != impl_->dim) {
        throw ValidationError("right-hand side has wrong row count");
    }
    if (impl_->dim == 0) return Eigen::MatrixXd(0, rhs.cols());
    if (impl_->sparse) return impl_->sparse->solve(rhs);
    return impl_->dense->solve(rhs);
}

Eigen::Index SpdSolver::dimension() const { return impl_->dim; }
SolveMode SpdSolver::mode() const { return impl_->mode; }
double SpdSolver::factor_seconds() const { return impl_->factor_seconds; }

}  // namespace cycleflow
