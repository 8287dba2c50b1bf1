#include "cycleflow/dual.hpp"

#include <chrono>

#include <Eigen/Dense>

#include "cycleflow/conventional.hpp"
#include "cycleflow/errors.hpp"
#include "cycleflow/operators.hpp"

namespace cycleflow {
namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void record(SolveInfo* info, const SpdSolver& solver, Eigen::Index rhs_count,
            double solve_seconds) {
    if (!info) return;
    info->dimension = solver.dimension();
    info->rhs_count = rhs_count;
    info->factor_seconds = solver.factor_seconds();
    info->solve_seconds = solve_seconds;
}

}  // namespace

CycleOperator::CycleOperator(const CycleBasis& basis, const Eigen::VectorXd& reactance,
                             SolveMode mode)
    : matrix_([&] {
          const Eigen::SparseMatrix<double> c = basis.mat.cast<double>();
          const Eigen::SparseMatrix<double> weighted = reactance.asDiagonal() * c;
          return Eigen::SparseMatrix<double>(c.transpose() * weighted);
      }()),
      solver_(matrix_, mode) {}

FlowDecomposition cycle_flows(const Grid& grid, const CycleBasis& basis,
                              const SpanningTreePaths& tree, int source, int sink,
                              double power, SolveMode mode) {
    const int n = grid.node_count();
    const Eigen::Index l = grid.line_count();
    if (source < 0 || source >= n || sink < 0 || sink >= n) {
        throw ValidationError("transaction endpoints out of range");
    }

    FlowDecomposition out;
    out.cycle_strengths = Eigen::VectorXd::Zero(basis.mat.cols());
    if (source == sink) {
        out.direct = Eigen::VectorXd::Zero(l);
        out.total = Eigen::VectorXd::Zero(l);
        return out;
    }

    // Tree path source -> sink: the root -> sink path minus the
    // root -> source path (the shared prefix cancels).
    const Eigen::SparseMatrix<double> paths = tree.paths.cast<double>();
    Eigen::VectorXd along = Eigen::VectorXd(paths.col(sink)) - Eigen::VectorXd(paths.col(source));
    out.direct = power * along;

    if (basis.mat.cols() == 0) {
        out.total = out.direct;
        return out;
    }

    const Eigen::SparseMatrix<double> c = basis.mat.cast<double>();
    const Eigen::VectorXd x = reactance_vector(grid);
    CycleOperator op(basis, x, mode);
    const Eigen::VectorXd rhs = -power * (c.transpose() * x.cwiseProduct(along).eval());
    out.cycle_strengths = op.solve(rhs);
    out.total = out.direct + c * out.cycle_strengths;
    return out;
}

SensitivityMatrix ptdf_dual(const Grid& grid, const CycleBasis& basis,
                            const SpanningTreePaths& tree, SolveMode mode,
                            SolveInfo* info) {
    const Eigen::Index k = basis.mat.cols();
    const Eigen::VectorXd x = reactance_vector(grid);

    SensitivityMatrix result;
    result.kind = FactorKind::Ptdf;
    result.slack = tree.slack;

    if (k == 0) {
        result.values = Eigen::MatrixXd(tree.paths.cast<double>());
        if (info) *info = SolveInfo{0, grid.node_count(), 0.0, 0.0};
        return result;
    }

    if (mode == SolveMode::Sparse) {
        const Eigen::SparseMatrix<double> c = basis.mat.cast<double>();
        const Eigen::SparseMatrix<double> t = tree.paths.cast<double>();
        const Eigen::SparseMatrix<double> xf = Eigen::SparseMatrix<double>(c.transpose()) * x.asDiagonal();
        const Eigen::SparseMatrix<double> m = xf * c;
        const Eigen::MatrixXd rhs = Eigen::MatrixXd(xf * t);

        SpdSolver solver(m, SolveMode::Sparse);
        const double start = now_seconds();
        const Eigen::MatrixXd temp = solver.solve(rhs);
        record(info, solver, rhs.cols(), now_seconds() - start);

        result.values = Eigen::MatrixXd(t) - c * temp;
    } else {
        const Eigen::MatrixXd c = Eigen::MatrixXd(basis.mat.cast<double>());
        const Eigen::MatrixXd t = Eigen::MatrixXd(tree.paths.cast<double>());
        const Eigen::MatrixXd xf = c.transpose() * x.asDiagonal();
        const Eigen::MatrixXd m = xf * c;
        const Eigen::MatrixXd rhs = xf * t;

        SpdSolver solver(m);
        const double start = now_seconds();
        const Eigen::MatrixXd temp = solver.solve(rhs);
        record(info, solver, rhs.cols(), now_seconds() - start);

        result.values = t - c * temp;
    }
    return result;
}

SensitivityMatrix ptdf_prime_dual(const Grid& grid, const CycleBasis& basis,
                                  SolveMode mode, SolveInfo* info) {
    const Eigen::Index l = grid.line_count();
    const Eigen::Index k = basis.mat.cols();
    const Eigen::VectorXd x = reactance_vector(grid);

    SensitivityMatrix result;
    result.kind = FactorKind::PtdfPrime;

    if (k == 0) {
        result.values = Eigen::MatrixXd::Identity(l, l);
        if (info) *info = SolveInfo{0, l, 0.0, 0.0};
        return result;
    }

    if (mode == SolveMode::Sparse) {
        const Eigen::SparseMatrix<double> c = basis.mat.cast<double>();
        const Eigen::SparseMatrix<double> xf = Eigen::SparseMatrix<double>(c.transpose()) * x.asDiagonal();
        const Eigen::SparseMatrix<double> m = xf * c;
        const Eigen::MatrixXd rhs = Eigen::MatrixXd(xf);

        SpdSolver solver(m, SolveMode::Sparse);
        const double start = now_seconds();
        const Eigen::MatrixXd temp = solver.solve(rhs);
        record(info, solver, rhs.cols(), now_seconds() - start);

        result.values = Eigen::MatrixXd::Identity(l, l) - c * temp;
    } else {
        const Eigen::MatrixXd c = Eigen::MatrixXd(basis.mat.cast<double>());
        const Eigen::MatrixXd xf = c.transpose() * x.asDiagonal();
        const Eigen::MatrixXd m = xf * c;

        SpdSolver solver(m);
        const double start = now_seconds();
        const Eigen::MatrixXd temp = solver.solve(xf);
        record(info, solver, xf.cols(), now_seconds() - start);

        result.values = Eigen::MatrixXd::Identity(l, l) - c * temp;
    }
    return result;
}

namespace {

// Thin orthonormal factor of sqrt(X_d) C, with a rank check.
Eigen::MatrixXd cycle_projector_q(const Grid& grid, const CycleBasis& basis,
                                  const Eigen::VectorXd& x) {
    const Eigen::Index l = grid.line_count();
    const Eigen::Index k = basis.mat.cols();
    const Eigen::MatrixXd weighted =
        x.cwiseSqrt().asDiagonal() * Eigen::MatrixXd(basis.mat.cast<double>());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(weighted);
    if (qr.rank() < k) {
        throw NumericalError("cycle basis is rank deficient: rank " +
                             std::to_string(qr.rank()) + " of " + std::to_string(k));
    }
    return qr.householderQ() * Eigen::MatrixXd::Identity(l, k);
}

}  // namespace

SensitivityMatrix ptdf_prime_qr(const Grid& grid, const CycleBasis& basis, SolveInfo* info) {
    const Eigen::Index l = grid.line_count();
    const Eigen::Index k = basis.mat.cols();

    SensitivityMatrix result;
    result.kind = FactorKind::PtdfPrime;

    if (k == 0) {
        result.values = Eigen::MatrixXd::Identity(l, l);
        if (info) *info = SolveInfo{0, l, 0.0, 0.0};
        return result;
    }

    const Eigen::VectorXd x = reactance_vector(grid);
    const double start = now_seconds();
    const Eigen::MatrixXd q = cycle_projector_q(grid, basis, x);
    const double qr_seconds = now_seconds() - start;
    if (info) *info = SolveInfo{k, l, qr_seconds, 0.0};

    const Eigen::VectorXd sqrt_b = susceptance_vector(grid).cwiseSqrt();
    result.values = Eigen::MatrixXd::Identity(l, l) -
                    (sqrt_b.asDiagonal() * q) * (q.transpose() * x.cwiseSqrt().asDiagonal());
    return result;
}

SensitivityMatrix ptdf_qr(const Grid& grid, const CycleBasis& basis,
                          const SpanningTreePaths& tree, SolveInfo* info) {
    const Eigen::Index k = basis.mat.cols();

    SensitivityMatrix result;
    result.kind = FactorKind::Ptdf;
    result.slack = tree.slack;

    const Eigen::MatrixXd t = Eigen::MatrixXd(tree.paths.cast<double>());
    if (k == 0) {
        result.values = t;
        if (info) *info = SolveInfo{0, grid.node_count(), 0.0, 0.0};
        return result;
    }

    const Eigen::VectorXd x = reactance_vector(grid);
    const double start = now_seconds();
    const Eigen::MatrixXd q = cycle_projector_q(grid, basis, x);
    const double qr_seconds = now_seconds() - start;
    if (info) *info = SolveInfo{k, grid.node_count(), qr_seconds, 0.0};

    const Eigen::VectorXd sqrt_b = susceptance_vector(grid).cwiseSqrt();
    result.values =
        t - (sqrt_b.asDiagonal() * q) * (q.transpose() * (x.cwiseSqrt().asDiagonal() * t));
    return result;
}

SensitivityMatrix lodf_dual(const Grid& grid, const CycleBasis& basis,
                            const std::vector<int>& bridges, SolveMode mode,
                            SolveInfo* info, std::vector<std::string>* warnings) {
    return lodf_from_ptdf_prime(ptdf_prime_dual(grid, basis, mode, info), bridges, warnings);
}

}  // namespace cycleflow
