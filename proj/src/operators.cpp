#include "cycleflow/operators.hpp"

namespace cycleflow {

SusceptanceOperators assemble_operators(const Grid& grid, const IncidenceMatrix& incidence) {
    const int l = grid.line_count();

    SusceptanceOperators ops;
    ops.susceptance.resize(l);
    ops.reactance.resize(l);
    for (int line = 0; line < l; ++line) {
        ops.susceptance[line] = grid.branches()[line].susceptance;
        ops.reactance[line] = grid.branches()[line].reactance;
    }

    const Eigen::SparseMatrix<double> oriented = incidence.mat.cast<double>();
    ops.flow = ops.susceptance.asDiagonal() * Eigen::SparseMatrix<double>(oriented.transpose());
    ops.nodal = oriented * ops.flow;
    return ops;
}

Eigen::VectorXd reactance_vector(const Grid& grid) {
    Eigen::VectorXd x(grid.line_count());
    for (int line = 0; line < grid.line_count(); ++line) {
        x[line] = grid.branches()[line].reactance;
    }
    return x;
}

Eigen::VectorXd susceptance_vector(const Grid& grid) {
    Eigen::VectorXd b(grid.line_count());
    for (int line = 0; line < grid.line_count(); ++line) {
        b[line] = grid.branches()[line].susceptance;
    }
    return b;
}

}  // namespace cycleflow
