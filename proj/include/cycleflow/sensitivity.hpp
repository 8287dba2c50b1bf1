#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace cycleflow {

enum class FactorKind { Ptdf, PtdfPrime, Lodf };

/// A dense sensitivity-factor matrix. Rows are lines; columns are injection
/// buses (PTDF, with the slack column identically zero) or lines (PTDF',
/// LODF). LODF columns whose outage would island the grid are flagged
/// undefined and filled with NaN.
struct SensitivityMatrix {
    FactorKind kind = FactorKind::Ptdf;
    Eigen::MatrixXd values;
    int slack = -1;                               // PTDF only
    std::vector<std::uint8_t> undefined_columns;  // LODF only, size L

    bool column_defined(Eigen::Index col) const {
        return undefined_columns.empty() || undefined_columns[static_cast<std::size_t>(col)] == 0;
    }
};

/// Max-abs entrywise difference, skipping columns undefined in either
/// operand. Throws ValidationError on shape mismatch.
double max_abs_difference(const SensitivityMatrix& a, const SensitivityMatrix& b);

/// The unit transaction vector q_sr: +1 at s, -1 at r (zero when s == r).
Eigen::VectorXd transaction_vector(int nodes, int source, int sink);

/// The injection-pattern matrix S for a fixed slack: column r is q_{slack,r}
/// and the slack column is zero. Column sums vanish.
Eigen::SparseMatrix<double> injection_matrix(int nodes, int slack);

}  // namespace cycleflow
