#include "tempnet/lp.hpp"

#include "tempnet/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace tempnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { Basic, AtLower, AtUpper, FreeZero };

struct SimplexState {
    const LpProblem* prob;
    int rows;
    int n_struct;          // structural columns
    int n_total;           // structural + artificial
    std::vector<double> art_sign;
    std::vector<Status> status;
    std::vector<int> basis;       // variable index per row
    Eigen::VectorXd x;            // length n_total
    std::vector<double> cost;     // phase-dependent
    std::vector<double> lo, hi;

    double col_dot(int j, const Eigen::VectorXd& y) const {
        if (j >= n_struct) return art_sign[j - n_struct] * y(j - n_struct);
        return prob->a.col(j).dot(y);
    }
    void add_col(int j, double scale, Eigen::VectorXd& acc) const {
        if (j >= n_struct)
            acc(j - n_struct) += art_sign[j - n_struct] * scale;
        else
            acc += scale * prob->a.col(j);
    }
    Eigen::MatrixXd basis_matrix() const {
        Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(rows, rows);
        for (int k = 0; k < rows; ++k) {
            const int j = basis[k];
            if (j >= n_struct)
                bmat(j - n_struct, k) = art_sign[j - n_struct];
            else
                bmat.col(k) = prob->a.col(j);
        }
        return bmat;
    }
};

// One simplex phase over the current cost vector. Returns the row duals of
// the final basis.
Eigen::VectorXd run_phase(SimplexState& st, double tol, long max_iter,
                          long bland_after, long* iterations) {
    const int rows = st.rows;
    Eigen::VectorXd y(rows);
    for (long iter = 0;; ++iter) {
        if (iter >= max_iter)
            throw NumericError("LP iteration cap exceeded after " +
                               std::to_string(iter) + " pivots");
        ++*iterations;

        Eigen::FullPivLU<Eigen::MatrixXd> lu(st.basis_matrix());
        if (!lu.isInvertible()) throw NumericError("LP basis became singular");

        // Refresh basic values from the nonbasic ones; avoids drift.
        Eigen::VectorXd rhs = st.prob->b;
        for (int j = 0; j < st.n_total; ++j) {
            if (st.status[j] == Status::Basic || st.x(j) == 0.0) continue;
            st.add_col(j, -st.x(j), rhs);
        }
        const Eigen::VectorXd xb = lu.solve(rhs);
        for (int k = 0; k < rows; ++k) st.x(st.basis[k]) = xb(k);

        Eigen::VectorXd cb(rows);
        for (int k = 0; k < rows; ++k) cb(k) = st.cost[st.basis[k]];
        y = lu.transpose().solve(cb);

        // Pricing: most negative violation, or lowest index once Bland's
        // rule kicks in.
        const bool bland = iter >= bland_after;
        int enter = -1;
        double enter_dir = 0.0;
        double best = tol;
        for (int j = 0; j < st.n_total; ++j) {
            if (st.status[j] == Status::Basic) continue;
            if (st.lo[j] == st.hi[j]) continue; // fixed
            const double d = st.cost[j] - st.col_dot(j, y);
            double viol = 0.0;
            double dir = 0.0;
            if (st.status[j] == Status::AtLower && d < -tol) {
                viol = -d;
                dir = 1.0;
            } else if (st.status[j] == Status::AtUpper && d > tol) {
                viol = d;
                dir = -1.0;
            } else if (st.status[j] == Status::FreeZero && std::abs(d) > tol) {
                viol = std::abs(d);
                dir = d < 0.0 ? 1.0 : -1.0;
            }
            if (viol == 0.0) continue;
            if (bland) {
                enter = j;
                enter_dir = dir;
                break;
            }
            if (viol > best) {
                best = viol;
                enter = j;
                enter_dir = dir;
            }
        }
        if (enter < 0) return y; // optimal for this phase

        Eigen::VectorXd acol = Eigen::VectorXd::Zero(rows);
        st.add_col(enter, 1.0, acol);
        const Eigen::VectorXd w = lu.solve(acol);

        // Ratio test: entering moves by t*enter_dir, basic row k changes at
        // rate -enter_dir*w(k).
        double t_limit = kInf;
        if (std::isfinite(st.lo[enter]) && std::isfinite(st.hi[enter]))
            t_limit = st.hi[enter] - st.lo[enter];
        int leave = -1; // basis position; -1 with finite t_limit = bound flip
        for (int k = 0; k < rows; ++k) {
            if (std::abs(w(k)) < 1e-11) continue;
            const int j = st.basis[k];
            const double rate = -enter_dir * w(k);
            double room;
            if (rate > 0.0)
                room = std::isfinite(st.hi[j]) ? (st.hi[j] - st.x(j)) / rate : kInf;
            else
                room = std::isfinite(st.lo[j]) ? (st.x(j) - st.lo[j]) / -rate : kInf;
            room = std::max(room, 0.0);
            if (room < t_limit - 1e-12 ||
                (room < t_limit + 1e-12 && leave >= 0 && j < st.basis[leave])) {
                t_limit = room;
                leave = k;
            }
        }
        if (!std::isfinite(t_limit)) throw NumericError("LP unbounded");

        // Apply the step.
        st.x(enter) += enter_dir * t_limit;
        for (int k = 0; k < rows; ++k)
            st.x(st.basis[k]) -= enter_dir * t_limit * w(k);

        if (leave < 0) {
            // Entering variable ran bound to bound.
            st.status[enter] = enter_dir > 0.0 ? Status::AtUpper : Status::AtLower;
            st.x(enter) = enter_dir > 0.0 ? st.hi[enter] : st.lo[enter];
            continue;
        }
        const int out = st.basis[leave];
        const double rate = -enter_dir * w(leave);
        if (rate > 0.0) {
            st.status[out] = Status::AtUpper;
            st.x(out) = st.hi[out];
        } else {
            st.status[out] = Status::AtLower;
            st.x(out) = st.lo[out];
        }
        st.basis[leave] = enter;
        st.status[enter] = Status::Basic;
    }
}

} // namespace

LpSolution solve_lp(const LpProblem& prob, double tol, long max_iter) {
    const int rows = static_cast<int>(prob.a.rows());
    const int n = static_cast<int>(prob.a.cols());
    if (rows < 1 || n < 1) throw ValidationError("empty LP");
    if (prob.b.size() != rows || prob.c.size() != n || prob.lo.size() != n ||
        prob.hi.size() != n)
        throw ValidationError("LP dimensions inconsistent");
    for (int j = 0; j < n; ++j)
        if (prob.lo(j) > prob.hi(j))
            throw ValidationError("LP bound crossing at column " + std::to_string(j));
    if (max_iter <= 0) max_iter = 10000 + 5L * n;
    const long bland_after = std::min<long>(5000, max_iter / 2);

    SimplexState st;
    st.prob = &prob;
    st.rows = rows;
    st.n_struct = n;
    st.n_total = n + rows;
    st.x = Eigen::VectorXd::Zero(st.n_total);
    st.status.resize(st.n_total);
    st.lo.resize(st.n_total);
    st.hi.resize(st.n_total);
    st.cost.assign(st.n_total, 0.0);
    for (int j = 0; j < n; ++j) {
        st.lo[j] = prob.lo(j);
        st.hi[j] = prob.hi(j);
        if (std::isfinite(prob.lo(j))) {
            st.status[j] = Status::AtLower;
            st.x(j) = prob.lo(j);
        } else if (std::isfinite(prob.hi(j))) {
            st.status[j] = Status::AtUpper;
            st.x(j) = prob.hi(j);
        } else {
            st.status[j] = Status::FreeZero;
            st.x(j) = 0.0;
        }
    }

    Eigen::VectorXd res = prob.b;
    for (int j = 0; j < n; ++j)
        if (st.x(j) != 0.0) res -= st.x(j) * prob.a.col(j);
    st.art_sign.resize(rows);
    st.basis.resize(rows);
    for (int k = 0; k < rows; ++k) {
        st.art_sign[k] = res(k) < 0.0 ? -1.0 : 1.0;
        const int j = n + k;
        st.basis[k] = j;
        st.status[j] = Status::Basic;
        st.lo[j] = 0.0;
        st.hi[j] = kInf;
        st.x(j) = std::abs(res(k));
        st.cost[j] = 1.0;
    }

    LpSolution sol;
    run_phase(st, tol, max_iter, bland_after, &sol.iterations);
    double art_total = 0.0;
    for (int k = 0; k < rows; ++k) art_total += st.x(n + k);
    const double feas_tol = 1e-7 * std::max(1.0, prob.b.cwiseAbs().maxCoeff());
    if (art_total > feas_tol)
        throw NumericError("LP infeasible: phase-1 objective " +
                           std::to_string(art_total));

    for (int k = 0; k < rows; ++k) {
        st.cost[n + k] = 0.0;
        st.lo[n + k] = 0.0;
        st.hi[n + k] = 0.0; // artificials pinned for phase 2
    }
    for (int j = 0; j < n; ++j) st.cost[j] = prob.c(j);
    sol.duals = run_phase(st, tol, max_iter, bland_after, &sol.iterations);

    sol.x = st.x.head(n);
    sol.objective = prob.c.dot(sol.x);
    return sol;
}

} // namespace tempnet
