#pragma once

#include <Eigen/Core>

namespace tempnet {

/// min c'x  subject to  a x = b,  lo <= x <= hi.
/// Infinite bounds are allowed (free variables use -inf/+inf).
struct LpProblem {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

struct LpSolution {
    Eigen::VectorXd x;
    Eigen::VectorXd duals; // one per row, from the final basis
    double objective = 0.0;
    long iterations = 0;
};

/// Two-phase revised simplex with bounded variables. Dantzig pricing with a
/// switch to Bland's rule after a fixed iteration count guards against
/// cycling. Throws NumericError on infeasibility, unboundedness, or when the
/// iteration cap is hit.
LpSolution solve_lp(const LpProblem& prob, double tol = 1e-9,
                    long max_iter = 0 /* 0: scale with problem size */);

} // namespace tempnet
