#include "cycleflow/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "cycleflow/errors.hpp"

namespace cycleflow {

double max_abs_difference(const SensitivityMatrix& a, const SensitivityMatrix& b) {
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
        throw ValidationError("sensitivity matrices have different shapes");
    }
    double dev = 0.0;
    for (Eigen::Index col = 0; col < a.values.cols(); ++col) {
        if (!a.column_defined(col) || !b.column_defined(col)) continue;
        dev = std::max(dev, (a.values.col(col) - b.values.col(col)).cwiseAbs().maxCoeff());
    }
    return dev;
}

Eigen::VectorXd transaction_vector(int nodes, int source, int sink) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(nodes);
    if (source != sink) {
        q[source] = +1.0;
        q[sink] = -1.0;
    }
    return q;
}

Eigen::SparseMatrix<double> injection_matrix(int nodes, int slack) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * nodes);
    for (int r = 0; r < nodes; ++r) {
        if (r == slack) continue;
        triplets.emplace_back(slack, r, +1.0);
        triplets.emplace_back(r, r, -1.0);
    }
    Eigen::SparseMatrix<double> s(nodes, nodes);
    s.setFromTriplets(triplets.begin(), triplets.end());
    return s;
}

}  // namespace cycleflow
