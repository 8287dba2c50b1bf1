#pragma once

#include <string>
#include <vector>

#include "cycleflow/operators.hpp"
#include "cycleflow/sensitivity.hpp"
#include "cycleflow/solver.hpp"

namespace cycleflow {

/// Node-based PTDF for a fixed slack: ground the slack angle, factor the
/// reduced Laplacian B_red (an SPD matrix), and solve against the reduced
/// flow matrix. Column r holds the line flows of a unit transaction
/// slack -> r; the slack column is zero.
SensitivityMatrix ptdf_conventional(const SusceptanceOperators& ops, int slack,
                                    SolveMode mode = SolveMode::Sparse,
                                    SolveInfo* info = nullptr);

/// Node-based PTDF': column l holds the line flows of a unit transaction
/// across line l's own endpoints (tail -> head). Independent of the
/// grounding node.
SensitivityMatrix ptdf_prime_conventional(const SusceptanceOperators& ops,
                                          SolveMode mode = SolveMode::Sparse,
                                          SolveInfo* info = nullptr);

/// LODF from PTDF': column l is PTDF'_{.,l} / (1 - PTDF'_{l,l}) for
/// non-bridge lines, the diagonal is -1 (an outaged line sheds its own
/// flow), and bridge columns are flagged undefined instead of dividing by
/// a vanishing denominator. Appends a note to `warnings` if the graph
/// bridge set and the |1 - PTDF'_{l,l}| < 1e-6 test ever disagree.
SensitivityMatrix lodf_from_ptdf_prime(const SensitivityMatrix& prime,
                                       const std::vector<int>& bridges,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace cycleflow
