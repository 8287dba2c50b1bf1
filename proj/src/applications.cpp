#include "cycleflow/applications.hpp"

#include <cmath>

#include "cycleflow/dual.hpp"
#include "cycleflow/errors.hpp"
#include "cycleflow/operators.hpp"

namespace cycleflow {

TieSwitchDelta tie_switch_delta(const Grid& tree_grid, int from_index, int to_index,
                                double reactance, int slack_index) {
    const int n = tree_grid.node_count();
    const int l = tree_grid.line_count();
    if (l != n - 1) {
        throw ValidationError("tie-switch closing needs a tree grid, got L=" +
                              std::to_string(l) + " for N=" + std::to_string(n));
    }
    if (from_index < 0 || from_index >= n || to_index < 0 || to_index >= n) {
        throw ValidationError("tie-switch endpoints out of range");
    }
    if (from_index == to_index) {
        throw ValidationError("tie switch cannot connect a bus to itself");
    }
    for (const Branch& br : tree_grid.branches()) {
        if ((br.tail == from_index && br.head == to_index) ||
            (br.tail == to_index && br.head == from_index)) {
            throw ValidationError("tie switch duplicates existing line " +
                                  std::to_string(tree_grid.id_of(br.tail)) + "-" +
                                  std::to_string(tree_grid.id_of(br.head)));
        }
    }

    const SpanningTreePaths tree = build_spanning_tree(tree_grid, slack_index);

    // The single induced cycle: the new branch plus the tree path
    // to_index -> from_index. Written through T this is
    // e_new + T_{.,from} - T_{.,to}.
    Eigen::VectorXi cycle = Eigen::VectorXi::Zero(l + 1);
    cycle[l] = 1;
    const Eigen::SparseMatrix<int>& paths = tree.paths;
    for (Eigen::SparseMatrix<int>::InnerIterator it(paths, from_index); it; ++it) {
        cycle[it.row()] += it.value();
    }
    for (Eigen::SparseMatrix<int>::InnerIterator it(paths, to_index); it; ++it) {
        cycle[it.row()] -= it.value();
    }

    Eigen::VectorXd x_closed(l + 1);
    x_closed.head(l) = reactance_vector(tree_grid);
    x_closed[l] = reactance;

    const Eigen::VectorXd cycle_d = cycle.cast<double>();
    const double total_reactance = cycle_d.cwiseAbs2().dot(x_closed);

    // overlap_ratio[r] = (sum of signed x over cycle lines on the path
    // slack -> r) / (sum of x over the cycle).
    Eigen::VectorXd overlap = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < n; ++r) {
        for (Eigen::SparseMatrix<int>::InnerIterator it(paths, r); it; ++it) {
            overlap[r] += cycle[it.row()] * x_closed[it.row()] * it.value();
        }
    }
    overlap /= total_reactance;

    TieSwitchDelta out;
    out.induced_cycle = cycle;
    out.overlap_ratio = overlap;
    out.delta_ptdf = -cycle_d * overlap.transpose();

    // Self-check against the full recomputation on the closed grid.
    std::vector<Branch> closed_branches = tree_grid.branches();
    closed_branches.push_back(branch_from_reactance(from_index, to_index, reactance));
    const Grid closed(tree_grid.name() + "+tie", tree_grid.buses(),
                      std::move(closed_branches), slack_index);
    const SpanningTreePaths closed_tree = build_spanning_tree(closed, slack_index);
    const CycleBasis closed_basis = build_cycle_basis(closed, closed_tree);
    const SensitivityMatrix closed_ptdf = ptdf_dual(closed, closed_basis, closed_tree);

    Eigen::MatrixXd tree_ptdf = Eigen::MatrixXd::Zero(l + 1, n);
    tree_ptdf.topRows(l) = Eigen::MatrixXd(paths.cast<double>());
    out.recompute_deviation =
        (closed_ptdf.values - tree_ptdf - out.delta_ptdf).cwiseAbs().maxCoeff();
    if (!(out.recompute_deviation <= 1e-9)) {
        throw NumericalError("tie-switch closed form deviates from recomputation by " +
                             std::to_string(out.recompute_deviation));
    }
    return out;
}

FlowSplit unscheduled_flows(const Grid& grid, const CycleBasis& basis,
                            const Eigen::VectorXd& schedule, double power,
                            SolveMode mode) {
    const int n = grid.node_count();
    const Eigen::Index l = grid.line_count();
    if (schedule.size() != l) {
        throw ValidationError("schedule vector must have one entry per line");
    }

    // Net nodal injection of the schedule; must be a unit transaction.
    Eigen::VectorXd net = Eigen::VectorXd::Zero(n);
    for (Eigen::Index line = 0; line < l; ++line) {
        net[grid.branches()[line].tail] += schedule[line];
        net[grid.branches()[line].head] -= schedule[line];
    }
    int source = 0, sink = 0;
    net.maxCoeff(&source);
    net.minCoeff(&sink);
    constexpr double tol = 1e-9;
    if (std::abs(net[source] - 1.0) > tol || std::abs(net[sink] + 1.0) > tol) {
        const int bad = std::abs(net[source] - 1.0) > tol ? source : sink;
        throw ValidationError("schedule does not transport a unit transaction: net injection at bus " +
                              std::to_string(grid.id_of(bad)) + " is " +
                              std::to_string(net[bad]));
    }
    for (int v = 0; v < n; ++v) {
        if (v == source || v == sink) continue;
        if (std::abs(net[v]) > tol) {
            throw ValidationError("schedule violates power balance at bus " +
                                  std::to_string(grid.id_of(v)) + ": net injection " +
                                  std::to_string(net[v]));
        }
    }

    FlowSplit split;
    split.schedule = schedule;
    split.scheduled = power * schedule;
    split.source = source;
    split.sink = sink;

    if (basis.mat.cols() == 0) {
        split.unscheduled = Eigen::VectorXd::Zero(l);
    } else {
        const Eigen::SparseMatrix<double> c = basis.mat.cast<double>();
        const Eigen::VectorXd x = reactance_vector(grid);
        CycleOperator op(basis, x, mode);
        const Eigen::VectorXd rhs = c.transpose() * x.cwiseProduct(schedule).eval();
        split.unscheduled = -power * (c * op.solve(rhs).eval());
    }
    split.actual = split.scheduled + split.unscheduled;
    return split;
}

}  // namespace cycleflow
