#include "cycleflow/oracle.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "cycleflow/errors.hpp"

namespace cycleflow {
namespace {

// Elementwise Laplacian over a subset of lines: B_nn = sum of incident b,
// B_nk = -b_nk.
Eigen::MatrixXd laplacian_without(const Grid& grid, int skipped_line) {
    const int n = grid.node_count();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int line = 0; line < grid.line_count(); ++line) {
        if (line == skipped_line) continue;
        const Branch& br = grid.branches()[line];
        b(br.tail, br.tail) += br.susceptance;
        b(br.head, br.head) += br.susceptance;
        b(br.tail, br.head) -= br.susceptance;
        b(br.head, br.tail) -= br.susceptance;
    }
    return b;
}

// Moore-Penrose pseudo-inverse of a Laplacian: eigendecompose and invert
// all eigenvalues except the single null one.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& laplacian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed in the oracle");
    }
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double cutoff = 1e-10 * values.cwiseAbs().maxCoeff();
    Eigen::VectorXd inverted(values.size());
    int zeroed = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) <= cutoff) {
            inverted[i] = 0.0;
            ++zeroed;
        } else {
            inverted[i] = 1.0 / values[i];
        }
    }
    if (zeroed != 1) {
        throw NumericalError("oracle expected exactly one null eigenvalue, found " +
                             std::to_string(zeroed));
    }
    return eig.eigenvectors() * inverted.asDiagonal() * eig.eigenvectors().transpose();
}

bool connected_without(const Grid& grid, int skipped_line) {
    const int n = grid.node_count();
    std::vector<std::vector<int>> adj(n);
    for (int line = 0; line < grid.line_count(); ++line) {
        if (line == skipped_line) continue;
        adj[grid.branches()[line].tail].push_back(grid.branches()[line].head);
        adj[grid.branches()[line].head].push_back(grid.branches()[line].tail);
    }
    std::vector<bool> seen(n, false);
    seen[0] = true;
    int count = 1;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++count;
                queue.push_back(v);
            }
        }
    }
    return count == n;
}

// Flows of a unit transaction source -> sink through a given pseudo-inverse.
Eigen::VectorXd transaction_flows(const Grid& grid, const Eigen::MatrixXd& pinv,
                                  int source, int sink) {
    Eigen::VectorXd flows(grid.line_count());
    for (int line = 0; line < grid.line_count(); ++line) {
        const Branch& br = grid.branches()[line];
        flows[line] = br.susceptance *
                      (pinv(br.tail, source) - pinv(br.tail, sink) -
                       pinv(br.head, source) + pinv(br.head, sink));
    }
    return flows;
}

}  // namespace

Eigen::MatrixXd oracle_ptdf(const Grid& grid, int slack) {
    if (grid.node_count() > 500) {
        throw ValidationError("oracle_ptdf is limited to N <= 500");
    }
    if (slack < 0 || slack >= grid.node_count()) {
        throw ValidationError("oracle slack index out of range");
    }
    const Eigen::MatrixXd pinv = pseudo_inverse(laplacian_without(grid, -1));

    Eigen::MatrixXd ptdf(grid.line_count(), grid.node_count());
    for (int line = 0; line < grid.line_count(); ++line) {
        const Branch& br = grid.branches()[line];
        for (int r = 0; r < grid.node_count(); ++r) {
            ptdf(line, r) = br.susceptance *
                            (pinv(br.tail, slack) - pinv(br.tail, r) -
                             pinv(br.head, slack) + pinv(br.head, r));
        }
    }
    return ptdf;
}

OracleLodf oracle_lodf(const Grid& grid) {
    if (grid.node_count() > 200) {
        throw ValidationError("oracle_lodf is limited to N <= 200");
    }
    const int l = grid.line_count();
    const Eigen::MatrixXd base_pinv = pseudo_inverse(laplacian_without(grid, -1));

    OracleLodf out;
    out.values.resize(l, l);
    out.undefined_columns.assign(static_cast<std::size_t>(l), 0);

    for (int outaged = 0; outaged < l; ++outaged) {
        if (!connected_without(grid, outaged)) {
            out.undefined_columns[static_cast<std::size_t>(outaged)] = 1;
            out.values.col(outaged).setConstant(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const Branch& br = grid.branches()[outaged];
        // Base case: the outaged line's own unit transaction, so its
        // pre-outage flow is nonzero by construction.
        const Eigen::VectorXd before = transaction_flows(grid, base_pinv, br.tail, br.head);
        const Eigen::MatrixXd post_pinv = pseudo_inverse(laplacian_without(grid, outaged));
        Eigen::VectorXd after = transaction_flows(grid, post_pinv, br.tail, br.head);
        after[outaged] = 0.0;  // the removed line carries nothing

        out.values.col(outaged) = (after - before) / before[outaged];
    }
    return out;
}

}  // namespace cycleflow
