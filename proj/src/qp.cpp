#include "tempnet/qp.hpp"

#include "tempnet/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace tempnet {

namespace {

// Solve 2 Q_FF y + mu 1 = c_F, sum(y) = 1 on the free index set.
void solve_equality(const Eigen::MatrixXd& q, const Eigen::VectorXd& c,
                    const std::vector<int>& free, Eigen::VectorXd* y,
                    double* mu) {
    const int f = static_cast<int>(free.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(f + 1, f + 1);
    Eigen::VectorXd rhs(f + 1);
    for (int a = 0; a < f; ++a) {
        for (int b = 0; b < f; ++b) kkt(a, b) = 2.0 * q(free[a], free[b]);
        kkt(a, f) = 1.0;
        kkt(f, a) = 1.0;
        rhs(a) = c(free[a]);
    }
    rhs(f) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible())
        throw NumericError("singular first-order system in budget QP");
    const Eigen::VectorXd sol = lu.solve(rhs);
    *y = sol.head(f);
    *mu = sol(f);
}

} // namespace

QpResult solve_budget_qp(const Eigen::MatrixXd& q, const Eigen::VectorXd& c,
                         bool long_only) {
    const int m = static_cast<int>(q.rows());
    if (m < 1 || q.cols() != m || c.size() != m)
        throw ValidationError("budget QP dimensions inconsistent");

    QpResult res;
    if (!long_only) {
        std::vector<int> all(m);
        for (int i = 0; i < m; ++i) all[i] = i;
        solve_equality(q, c, all, &res.x, &res.multiplier);
        res.iterations = 1;
        const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
        const double resid =
            (2.0 * q * res.x + Eigen::VectorXd::Constant(m, res.multiplier) - c)
                .cwiseAbs()
                .maxCoeff();
        if (resid > 1e-8 * std::max(scale, q.cwiseAbs().maxCoeff()))
            throw NumericError("budget QP first-order residual too large");
        return res;
    }

    Eigen::VectorXd x = Eigen::VectorXd::Constant(m, 1.0 / m);
    std::vector<bool> active(m, false);
    const int max_iter = 100 + 20 * m;
    double mu = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        res.iterations = iter + 1;
        std::vector<int> free;
        for (int i = 0; i < m; ++i)
            if (!active[i]) free.push_back(i);

        Eigen::VectorXd y;
        solve_equality(q, c, free, &y, &mu);

        double min_y = 0.0;
        for (int a = 0; a < static_cast<int>(free.size()); ++a)
            min_y = std::min(min_y, y(a));
        if (min_y >= -1e-12) {
            for (int i = 0; i < m; ++i) x(i) = 0.0;
            for (int a = 0; a < static_cast<int>(free.size()); ++a)
                x(free[a]) = std::max(y(a), 0.0);

            // Bound multipliers: lambda_i = (2Qx - c)_i + mu must be >= 0.
            const Eigen::VectorXd g = 2.0 * q * x - c;
            int worst = -1;
            double worst_lambda = -1e-9;
            for (int i = 0; i < m; ++i) {
                if (!active[i]) continue;
                const double lambda = g(i) + mu;
                if (lambda < worst_lambda) {
                    worst_lambda = lambda;
                    worst = i;
                }
            }
            if (worst < 0) {
                res.x = x;
                res.multiplier = mu;
                return res;
            }
            active[worst] = false;
            continue;
        }

        // Step toward y until the first free variable hits zero.
        double alpha = 1.0;
        int blocking = -1;
        for (int a = 0; a < static_cast<int>(free.size()); ++a) {
            const double d = y(a) - x(free[a]);
            if (d >= 0.0) continue;
            const double limit = x(free[a]) / -d;
            if (limit < alpha) {
                alpha = limit;
                blocking = free[a];
            }
        }
        if (blocking < 0) {
            // min_y < 0 guarantees a blocking index; defensive.
            throw NumericError("budget QP step computation failed");
        }
        for (int a = 0; a < static_cast<int>(free.size()); ++a) {
            const int i = free[a];
            x(i) += alpha * (y(a) - x(i));
        }
        x(blocking) = 0.0;
        active[blocking] = true;
    }
    throw NumericError("budget QP active-set loop exceeded " +
                       std::to_string(max_iter) + " iterations (m=" +
                       std::to_string(m) + ")");
}

} // namespace tempnet
