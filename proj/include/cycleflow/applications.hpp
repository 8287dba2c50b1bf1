#pragma once

#include <Eigen/Dense>

#include "cycleflow/grid.hpp"
#include "cycleflow/solver.hpp"
#include "cycleflow/topology.hpp"

namespace cycleflow {

/// Effect of closing a tie switch on a radial (tree) grid: the new branch
/// induces exactly one cycle, and the PTDF change is confined to its lines,
///   delta_ptdf = -c * overlap_ratio^t,
/// where overlap_ratio[r] is the reactance-weighted signed overlap of the
/// induced cycle with the tree path slack -> r divided by the total cycle
/// reactance. Rows off the induced cycle are structurally zero.
struct TieSwitchDelta {
    Eigen::VectorXi induced_cycle;  // length L+1, the new branch is line L
    Eigen::MatrixXd delta_ptdf;     // (L+1) x N
    Eigen::VectorXd overlap_ratio;  // per sink node r
    double recompute_deviation;     // closed form vs full recomputation
};

/// Close `from_index -> to_index` (reactance x) on a tree grid rooted at
/// `slack_index`. The closed-form delta is checked against recomputing the
/// closed grid's PTDF minus the tree's; disagreement beyond 1e-9 throws
/// NumericalError. Throws ValidationError if the grid is not a tree or the
/// branch duplicates an existing line.
TieSwitchDelta tie_switch_delta(const Grid& tree_grid, int from_index, int to_index,
                                double reactance, int slack_index);

/// A nominated transaction split into scheduled and unscheduled parts.
/// unscheduled = -P C (C^t X_d C)^{-1} C^t X_d schedule is a pure cycle
/// flow (I * unscheduled = 0) and actual = scheduled + unscheduled equals
/// the physical flows of (source, sink, P) for every valid schedule.
struct FlowSplit {
    Eigen::VectorXd schedule;     // the nominated transport vector
    Eigen::VectorXd scheduled;    // MW
    Eigen::VectorXd unscheduled;  // MW
    Eigen::VectorXd actual;       // MW
    int source = -1;              // inferred from the schedule
    int sink = -1;
};

/// Split `power` MW over the nominated schedule. The schedule must
/// transport one unit consistently: I * schedule = q_sr for some node pair;
/// otherwise ValidationError names a violated bus.
FlowSplit unscheduled_flows(const Grid& grid, const CycleBasis& basis,
                            const Eigen::VectorXd& schedule, double power,
                            SolveMode mode = SolveMode::Sparse);

}  // namespace cycleflow
