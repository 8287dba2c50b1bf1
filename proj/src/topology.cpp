#include "cycleflow/topology.hpp"

#include <algorithm>
#include <deque>

#include <Eigen/Dense>

#include "cycleflow/errors.hpp"

namespace cycleflow {
namespace {

using Triplet = Eigen::Triplet<int>;

// (neighbor, line) adjacency of the simple graph.
std::vector<std::vector<std::pair<int, int>>> adjacency_of(const Grid& grid) {
    std::vector<std::vector<std::pair<int, int>>> adj(grid.node_count());
    const auto& branches = grid.branches();
    for (int l = 0; l < grid.line_count(); ++l) {
        adj[branches[l].tail].emplace_back(branches[l].head, l);
        adj[branches[l].head].emplace_back(branches[l].tail, l);
    }
    return adj;
}

}  // namespace

IncidenceMatrix build_incidence(const Grid& grid) {
    std::vector<Triplet> triplets;
    triplets.reserve(2 * grid.line_count());
    for (int l = 0; l < grid.line_count(); ++l) {
        triplets.emplace_back(grid.branches()[l].tail, l, +1);
        triplets.emplace_back(grid.branches()[l].head, l, -1);
    }
    IntSparse mat(grid.node_count(), grid.line_count());
    mat.setFromTriplets(triplets.begin(), triplets.end());
    return IncidenceMatrix{std::move(mat)};
}

SpanningTreePaths build_spanning_tree(const Grid& grid, Traversal traversal) {
    return build_spanning_tree(grid, grid.slack(), traversal);
}

SpanningTreePaths build_spanning_tree(const Grid& grid, int root, Traversal traversal) {
    const int n = grid.node_count();
    const int l = grid.line_count();
    if (root < 0 || root >= n) {
        throw ValidationError("spanning-tree root out of range: " + std::to_string(root));
    }
    const auto adjacency = adjacency_of(grid);

    SpanningTreePaths tree;
    tree.slack = root;
    tree.parent_node.assign(n, -1);
    tree.parent_line.assign(n, -1);
    tree.depth.assign(n, 0);

    std::vector<bool> visited(n, false);
    visited[root] = true;
    std::deque<int> frontier{root};
    while (!frontier.empty()) {
        int u;
        if (traversal == Traversal::Bfs) {
            u = frontier.front();
            frontier.pop_front();
        } else {
            u = frontier.back();
            frontier.pop_back();
        }
        for (const auto& [v, line] : adjacency[u]) {
            if (visited[v]) continue;
            visited[v] = true;
            tree.parent_node[v] = u;
            tree.parent_line[v] = line;
            tree.depth[v] = tree.depth[u] + 1;
            frontier.push_back(v);
        }
    }
    // Grid guarantees connectivity, so every node was reached.

    tree.tree_lines.reserve(n - 1);
    for (int v = 0; v < n; ++v) {
        if (v != root) tree.tree_lines.push_back(tree.parent_line[v]);
    }
    std::sort(tree.tree_lines.begin(), tree.tree_lines.end());

    // Column r of T: walk r up to the root. The path root -> r crosses the
    // line into v downward (parent -> v), so the sign is +1 when v is the
    // head of that line.
    std::vector<Triplet> triplets;
    for (int r = 0; r < n; ++r) {
        for (int v = r; v != root; v = tree.parent_node[v]) {
            const int line = tree.parent_line[v];
            triplets.emplace_back(line, r, grid.branches()[line].head == v ? +1 : -1);
        }
    }
    tree.paths.resize(l, n);
    tree.paths.setFromTriplets(triplets.begin(), triplets.end());
    return tree;
}

CycleBasis build_cycle_basis(const Grid& grid, const SpanningTreePaths& tree) {
    const int l = grid.line_count();
    const int n = grid.node_count();
    const int k = l - n + 1;

    std::vector<bool> is_tree_line(l, false);
    for (int line : tree.tree_lines) is_tree_line[line] = true;

    // Direction v -> parent(v) relative to the orientation of the line
    // between them.
    auto sign_up = [&](int v) {
        return grid.branches()[tree.parent_line[v]].tail == v ? +1 : -1;
    };

    CycleBasis basis;
    basis.chords.reserve(k);
    std::vector<Triplet> triplets;
    int column = 0;
    for (int chord = 0; chord < l; ++chord) {
        if (is_tree_line[chord]) continue;
        basis.chords.push_back(chord);
        triplets.emplace_back(chord, column, +1);

        // Close the cycle with the tree path head -> tail, walking both
        // endpoints up to their lowest common ancestor.
        int t = grid.branches()[chord].tail;
        int h = grid.branches()[chord].head;
        while (tree.depth[h] > tree.depth[t]) {
            triplets.emplace_back(tree.parent_line[h], column, sign_up(h));
            h = tree.parent_node[h];
        }
        while (tree.depth[t] > tree.depth[h]) {
            triplets.emplace_back(tree.parent_line[t], column, -sign_up(t));
            t = tree.parent_node[t];
        }
        while (t != h) {
            triplets.emplace_back(tree.parent_line[h], column, sign_up(h));
            triplets.emplace_back(tree.parent_line[t], column, -sign_up(t));
            h = tree.parent_node[h];
            t = tree.parent_node[t];
        }
        ++column;
    }

    basis.mat.resize(l, k);
    basis.mat.setFromTriplets(triplets.begin(), triplets.end());
    return basis;
}

bool cycle_space_equal(const CycleBasis& a, const CycleBasis& b) {
    if (a.mat.rows() != b.mat.rows()) {
        throw ValidationError("cycle bases live on different line sets: " +
                              std::to_string(a.mat.rows()) + " vs " +
                              std::to_string(b.mat.rows()) + " lines");
    }
    const Eigen::Index rows = a.mat.rows();
    Eigen::MatrixXd ad = Eigen::MatrixXd(a.mat.cast<double>());
    Eigen::MatrixXd bd = Eigen::MatrixXd(b.mat.cast<double>());
    Eigen::MatrixXd both(rows, ad.cols() + bd.cols());
    both << ad, bd;

    const auto rank = [](const Eigen::MatrixXd& m) {
        if (m.cols() == 0) return Eigen::Index{0};
        return Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(m).rank();
    };
    const Eigen::Index ra = rank(ad);
    const Eigen::Index rb = rank(bd);
    return ra == rb && rank(both) == ra;
}

std::vector<int> find_bridges(const Grid& grid) {
    const int n = grid.node_count();
    const auto adjacency = adjacency_of(grid);

    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<int> bridges;
    int time = 0;

    // Iterative low-link DFS; the recursion depth of path-like grids would
    // overflow the call stack.
    struct Frame {
        int node;
        int entry_line;
        std::size_t next;
    };
    std::vector<Frame> stack;
    for (int start = 0; start < n; ++start) {
        if (disc[start] >= 0) continue;
        stack.push_back({start, -1, 0});
        disc[start] = low[start] = time++;
        while (!stack.empty()) {
            Frame& frame = stack.back();
            if (frame.next < adjacency[frame.node].size()) {
                const auto [v, line] = adjacency[frame.node][frame.next++];
                if (line == frame.entry_line) continue;
                if (disc[v] < 0) {
                    disc[v] = low[v] = time++;
                    stack.push_back({v, line, 0});
                } else {
                    low[frame.node] = std::min(low[frame.node], disc[v]);
                }
            } else {
                const Frame done = frame;
                stack.pop_back();
                if (!stack.empty()) {
                    Frame& parent = stack.back();
                    low[parent.node] = std::min(low[parent.node], low[done.node]);
                    if (low[done.node] > disc[parent.node]) {
                        bridges.push_back(done.entry_line);
                    }
                }
            }
        }
    }
    std::sort(bridges.begin(), bridges.end());
    return bridges;
}

Topology build_topology(const Grid& grid) {
    Topology topo;
    topo.incidence = build_incidence(grid);
    topo.tree = build_spanning_tree(grid);
    topo.cycles = build_cycle_basis(grid, topo.tree);
    topo.bridges = find_bridges(grid);
    return topo;
}

}  // namespace cycleflow
