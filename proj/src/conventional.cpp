#include "cycleflow/conventional.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "cycleflow/errors.hpp"

namespace cycleflow {
namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// Laplacian minor: drop the slack row and column.
Eigen::SparseMatrix<double> reduce_nodal(const Eigen::SparseMatrix<double>& nodal, int slack) {
    const Eigen::Index n = nodal.rows();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(nodal.nonZeros());
    for (Eigen::Index col = 0; col < nodal.outerSize(); ++col) {
        if (col == slack) continue;
        for (Eigen::SparseMatrix<double>::InnerIterator it(nodal, col); it; ++it) {
            if (it.row() == slack) continue;
            triplets.emplace_back(it.row() < slack ? it.row() : it.row() - 1,
                                  col < slack ? col : col - 1, it.value());
        }
    }
    Eigen::SparseMatrix<double> reduced(n - 1, n - 1);
    reduced.setFromTriplets(triplets.begin(), triplets.end());
    return reduced;
}

// Drop one column of an L x N sparse matrix.
Eigen::SparseMatrix<double> drop_column(const Eigen::SparseMatrix<double>& wide, int dropped) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(wide.nonZeros());
    for (Eigen::Index col = 0; col < wide.outerSize(); ++col) {
        if (col == dropped) continue;
        const Eigen::Index reduced = col < dropped ? col : col - 1;
        for (Eigen::SparseMatrix<double>::InnerIterator it(wide, col); it; ++it) {
            triplets.emplace_back(it.row(), reduced, it.value());
        }
    }
    Eigen::SparseMatrix<double> out(wide.rows(), wide.cols() - 1);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

}  // namespace

SensitivityMatrix ptdf_conventional(const SusceptanceOperators& ops, int slack,
                                    SolveMode mode, SolveInfo* info) {
    const Eigen::Index n = ops.nodal.rows();
    const Eigen::Index l = ops.flow.rows();
    if (slack < 0 || slack >= n) {
        throw ValidationError("slack index out of range: " + std::to_string(slack));
    }

    const Eigen::SparseMatrix<double> reduced = reduce_nodal(ops.nodal, slack);
    const Eigen::SparseMatrix<double> flow_red = drop_column(ops.flow, slack);
    const Eigen::MatrixXd rhs = Eigen::MatrixXd(flow_red.transpose());

    SpdSolver solver(reduced, mode);
    const double start = now_seconds();
    const Eigen::MatrixXd angles = solver.solve(rhs);  // (N-1) x L
    const double solve_seconds = now_seconds() - start;
    if (info) {
        info->dimension = solver.dimension();
        info->rhs_count = rhs.cols();
        info->factor_seconds = solver.factor_seconds();
        info->solve_seconds = solve_seconds;
    }

    // The grounded solve gives flows for a unit injection at r balanced at
    // the slack; the transaction slack -> r is its negation.
    SensitivityMatrix result;
    result.kind = FactorKind::Ptdf;
    result.slack = slack;
    result.values = Eigen::MatrixXd::Zero(l, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        if (r == slack) continue;
        result.values.col(r) = -angles.row(r < slack ? r : r - 1).transpose();
    }
    return result;
}

SensitivityMatrix ptdf_prime_conventional(const SusceptanceOperators& ops,
                                          SolveMode mode, SolveInfo* info) {
    const Eigen::Index n = ops.nodal.rows();
    const Eigen::Index l = ops.flow.rows();
    const int ground = 0;  // any grounding node gives the same PTDF'

    const Eigen::SparseMatrix<double> reduced = reduce_nodal(ops.nodal, ground);
    const Eigen::SparseMatrix<double> flow_red = drop_column(ops.flow, ground);

    // Reduced incidence as the right-hand side, with exact +-1 entries
    // recovered from the sign pattern of B_f.
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n - 1, l);
    for (Eigen::Index col = 0; col < flow_red.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(flow_red, col); it; ++it) {
            rhs(col, it.row()) = it.value() > 0.0 ? 1.0 : -1.0;
        }
    }

    SpdSolver solver(reduced, mode);
    const double start = now_seconds();
    const Eigen::MatrixXd angles = solver.solve(rhs);  // (N-1) x L
    const double solve_seconds = now_seconds() - start;
    if (info) {
        info->dimension = solver.dimension();
        info->rhs_count = rhs.cols();
        info->factor_seconds = solver.factor_seconds();
        info->solve_seconds = solve_seconds;
    }

    SensitivityMatrix result;
    result.kind = FactorKind::PtdfPrime;
    result.values = flow_red * angles;
    return result;
}

SensitivityMatrix lodf_from_ptdf_prime(const SensitivityMatrix& prime,
                                       const std::vector<int>& bridges,
                                       std::vector<std::string>* warnings) {
    const Eigen::Index l = prime.values.rows();
    if (prime.kind != FactorKind::PtdfPrime || prime.values.cols() != l) {
        throw ValidationError("LODF needs a square PTDF' matrix");
    }

    std::vector<std::uint8_t> is_bridge(static_cast<std::size_t>(l), 0);
    for (int line : bridges) is_bridge[static_cast<std::size_t>(line)] = 1;

    SensitivityMatrix result;
    result.kind = FactorKind::Lodf;
    result.values.resize(l, l);
    result.undefined_columns.assign(static_cast<std::size_t>(l), 0);

    constexpr double near_one = 1e-6;
    for (Eigen::Index col = 0; col < l; ++col) {
        const double own = prime.values(col, col);
        const bool bridge = is_bridge[static_cast<std::size_t>(col)] != 0;
        if (warnings && bridge != (std::abs(1.0 - own) < near_one)) {
            warnings->push_back("line " + std::to_string(col) +
                                ": bridge test and own-transfer factor disagree (PTDF'_ll = " +
                                std::to_string(own) + ")");
        }
        if (bridge) {
            result.undefined_columns[static_cast<std::size_t>(col)] = 1;
            result.values.col(col).setConstant(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        result.values.col(col) = prime.values.col(col) / (1.0 - own);
        result.values(col, col) = -1.0;
    }
    return result;
}

}  // namespace cycleflow
