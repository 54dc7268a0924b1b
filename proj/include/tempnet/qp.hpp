#pragma once

#include <Eigen/Core>

namespace tempnet {

struct QpResult {
    Eigen::VectorXd x;
    double multiplier = 0.0; // budget constraint multiplier
    int iterations = 0;
};

/// min x'Qx - c'x  subject to  sum(x) = 1, and x >= 0 when long_only.
/// Q must be symmetric positive semidefinite (callers add a ridge when it is
/// near-singular). Sign-free case is one saddle-point solve; the long-only
/// case runs a primal active-set loop from the equal-weight point.
QpResult solve_budget_qp(const Eigen::MatrixXd& q, const Eigen::VectorXd& c,
                         bool long_only);

} // namespace tempnet
