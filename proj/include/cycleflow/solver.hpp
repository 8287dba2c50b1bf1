#pragma once

#include <memory>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace cycleflow {

/// Storage/execution mode for the linear-algebra paths. Sparse keeps all
/// operands in compressed-column form and factors with a sparse Cholesky;
/// Dense densifies operands and uses dense kernels throughout.
enum class SolveMode { Sparse, Dense };

/// Instrumentation for one factor-and-solve: the dimension of the factored
/// system, the number of right-hand sides, and the wall time spent in
/// factorization plus substitution (matrix assembly excluded).
struct SolveInfo {
    Eigen::Index dimension = 0;
    Eigen::Index rhs_count = 0;
    double factor_seconds = 0.0;
    double solve_seconds = 0.0;

    double seconds() const { return factor_seconds + solve_seconds; }
};

/// One-shot Cholesky factorization of a symmetric positive definite matrix
/// with multi-right-hand-side solves. The factorization is immutable after
/// construction and solve() is const and safe to call concurrently from
/// multiple threads. A zero-dimensional system is legal (tree grids have an
/// empty cycle space) and solves to an empty matrix.
///
/// Throws NumericalError when the matrix is not positive definite.
class SpdSolver {
public:
    SpdSolver(const Eigen::SparseMatrix<double>& matrix, SolveMode mode);
    explicit SpdSolver(const Eigen::MatrixXd& matrix);  // implies Dense
    ~SpdSolver();
    SpdSolver(SpdSolver&&) noexcept;
    SpdSolver& operator=(SpdSolver&&) noexcept;

    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

    Eigen::Index dimension() const;
    SolveMode mode() const;
    /// Wall time the constructor spent factorizing.
    double factor_seconds() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cycleflow
