#pragma once

#include <string>
#include <vector>

#include "cycleflow/grid.hpp"
#include "cycleflow/sensitivity.hpp"
#include "cycleflow/solver.hpp"
#include "cycleflow/topology.hpp"

namespace cycleflow {

/// The cycle-space operator M = C^t X_d C, factored once per grid and
/// reused for every right-hand side. M is symmetric positive definite for
/// a connected grid with positive reactances; its dimension L - N + 1 is
/// what makes the cycle route cheap on sparse-cycle grids. Immutable after
/// construction; concurrent solve() calls are safe.
class CycleOperator {
public:
    CycleOperator(const CycleBasis& basis, const Eigen::VectorXd& reactance,
                  SolveMode mode = SolveMode::Sparse);

    Eigen::Index dimension() const { return matrix_.rows(); }
    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
    double factor_seconds() const { return solver_.factor_seconds(); }

    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return solver_.solve(rhs); }

private:
    Eigen::SparseMatrix<double> matrix_;
    SpdSolver solver_;
};

/// One transaction split into a direct tree-path flow and the circulating
/// cycle flows that correct it to the physical solution:
///   total = direct + C * cycle_strengths,
/// with I * total = power * q_sr (conservation) and C^t X_d total = 0
/// (closure). All components in MW.
struct FlowDecomposition {
    Eigen::VectorXd direct;
    Eigen::VectorXd cycle_strengths;
    Eigen::VectorXd total;
};

/// Decompose the flows of `power` MW injected at node `source` and
/// withdrawn at node `sink`. The direct part rides the tree paths of T
/// (source or sink need not be the tree root); the strengths solve
/// M f = -power * C^t X_d t. source == sink yields the zero decomposition.
FlowDecomposition cycle_flows(const Grid& grid, const CycleBasis& basis,
                              const SpanningTreePaths& tree, int source, int sink,
                              double power, SolveMode mode = SolveMode::Sparse);

/// Cycle-space PTDF, the two-step no-inverse form:
///   solve (C^t X_d C) TEMP = (C^t X_d T), then PTDF = T - C TEMP.
/// Equals ptdf_conventional for the tree root as slack; the factored system
/// has dimension L - N + 1 instead of N - 1.
SensitivityMatrix ptdf_dual(const Grid& grid, const CycleBasis& basis,
                            const SpanningTreePaths& tree,
                            SolveMode mode = SolveMode::Sparse,
                            SolveInfo* info = nullptr);

/// Cycle-space PTDF': same solve with the identity in place of T,
///   PTDF' = 1 - C (C^t X_d C)^{-1} C^t X_d.
SensitivityMatrix ptdf_prime_dual(const Grid& grid, const CycleBasis& basis,
                                  SolveMode mode = SolveMode::Sparse,
                                  SolveInfo* info = nullptr);

/// Factorization-free PTDF' via the thin QR of sqrt(X_d) C = Q R:
///   PTDF' = 1 - sqrt(B_d) Q Q^t sqrt(X_d).
/// Q Q^t is the orthogonal projector onto the reactance-weighted cycle
/// space. Throws NumericalError if the basis is rank deficient.
SensitivityMatrix ptdf_prime_qr(const Grid& grid, const CycleBasis& basis,
                                SolveInfo* info = nullptr);

/// PTDF through the same QR projector applied to T (the ptdf subcommand's
/// qr method): PTDF = T - sqrt(B_d) Q (Q^t sqrt(X_d) T).
SensitivityMatrix ptdf_qr(const Grid& grid, const CycleBasis& basis,
                          const SpanningTreePaths& tree, SolveInfo* info = nullptr);

/// LODF from the cycle-space PTDF'; bridge and diagonal conventions as in
/// lodf_from_ptdf_prime.
SensitivityMatrix lodf_dual(const Grid& grid, const CycleBasis& basis,
                            const std::vector<int>& bridges,
                            SolveMode mode = SolveMode::Sparse,
                            SolveInfo* info = nullptr,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace cycleflow
