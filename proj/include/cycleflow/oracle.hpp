#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cycleflow/grid.hpp"

namespace cycleflow {

/// Brute-force ground truth for the production methods. Deliberately shares
/// no code with them: the Laplacian is assembled from the elementwise
/// definition, inverted via a full eigendecomposition (Moore-Penrose, null
/// eigenvalue zeroed), and factors are evaluated entry by entry.
/// Desk-size grids only.

/// PTDF[l, r] = b_l (X_ts - X_tr - X_hs + X_hr) for line l = (t, h).
/// Requires N <= 500.
Eigen::MatrixXd oracle_ptdf(const Grid& grid, int slack);

struct OracleLodf {
    Eigen::MatrixXd values;
    std::vector<std::uint8_t> undefined_columns;
};

/// LODF by outage-and-rebuild: for each non-bridge line, remove it,
/// recompute flows for that line's own unit transaction (which guarantees a
/// nonzero pre-outage flow), and take the flow change over the pre-outage
/// flow. Bridge columns (removal disconnects, found by BFS) are flagged.
/// Requires N <= 200.
OracleLodf oracle_lodf(const Grid& grid);

}  // namespace cycleflow
