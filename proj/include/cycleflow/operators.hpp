#pragma once

#include <Eigen/SparseCore>

#include "cycleflow/grid.hpp"
#include "cycleflow/topology.hpp"

namespace cycleflow {

/// The susceptance-weighted operators of a grid. `susceptance` and
/// `reactance` are the diagonals of B_d and X_d; `nodal` is the Laplacian
/// B = I B_d I^t and `flow` maps angles to line flows, B_f = B_d I^t.
struct SusceptanceOperators {
    Eigen::VectorXd susceptance;         // L
    Eigen::VectorXd reactance;           // L
    Eigen::SparseMatrix<double> nodal;   // N x N
    Eigen::SparseMatrix<double> flow;    // L x N
};

SusceptanceOperators assemble_operators(const Grid& grid, const IncidenceMatrix& incidence);

/// Per-line reactance vector of a grid (the X_d diagonal).
Eigen::VectorXd reactance_vector(const Grid& grid);

/// Per-line susceptance vector of a grid (the B_d diagonal).
Eigen::VectorXd susceptance_vector(const Grid& grid);

}  // namespace cycleflow
