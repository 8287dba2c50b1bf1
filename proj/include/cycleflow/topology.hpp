#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "cycleflow/grid.hpp"

namespace cycleflow {

/// Integer sparse matrix; all graph-algebra products here stay in exact
/// integer arithmetic.
using IntSparse = Eigen::SparseMatrix<int>;

/// Oriented node-edge incidence matrix, N x L. Column l has +1 at the tail
/// of line l and -1 at its head; column sums are zero.
struct IncidenceMatrix {
    IntSparse mat;
};

IncidenceMatrix build_incidence(const Grid& grid);

enum class Traversal { Bfs, Dfs };

/// A spanning tree rooted at a node, plus the L x N path matrix T whose
/// column r encodes the unique tree path root -> r: +1 where the path
/// traverses a line in its own orientation, -1 against it. Column `root`
/// is zero, and I * T_{.,r} = e_root - e_r.
struct SpanningTreePaths {
    IntSparse paths;             // T, L x N
    std::vector<int> tree_lines; // the N-1 tree line indices, ascending
    int slack = 0;               // the root
    std::vector<int> parent_node;  // -1 at the root
    std::vector<int> parent_line;  // -1 at the root
    std::vector<int> depth;
};

/// Breadth-first (default) or depth-first tree rooted at the grid slack.
SpanningTreePaths build_spanning_tree(const Grid& grid,
                                      Traversal traversal = Traversal::Bfs);
/// Same, rooted at an arbitrary node.
SpanningTreePaths build_spanning_tree(const Grid& grid, int root,
                                      Traversal traversal = Traversal::Bfs);

/// Fundamental cycle basis: one column per chord (non-tree line). The
/// column for chord e = (t, h) is the unit vector at e plus the tree path
/// h -> t, so the chord coefficient is +1 and I * C = 0 exactly.
///
/// `chords` is empty for literal (non-chordal) bases loaded as fixtures;
/// every computation below only uses `mat`.
struct CycleBasis {
    IntSparse mat;           // C, L x (L-N+1)
    std::vector<int> chords; // chord line index per column
};

CycleBasis build_cycle_basis(const Grid& grid, const SpanningTreePaths& tree);

/// True iff the rational column spans of the two bases coincide (rank of
/// the concatenation equals the rank of each). Throws ValidationError on a
/// row-dimension mismatch.
bool cycle_space_equal(const CycleBasis& a, const CycleBasis& b);

/// Line indices whose removal disconnects the grid, ascending. Found by
/// low-link depth-first search, independent of any numerical quantity.
std::vector<int> find_bridges(const Grid& grid);

/// Everything downstream code needs, built once per grid and immutable.
struct Topology {
    IncidenceMatrix incidence;
    SpanningTreePaths tree;
    CycleBasis cycles;
    std::vector<int> bridges;
};

Topology build_topology(const Grid& grid);

}  // namespace cycleflow
